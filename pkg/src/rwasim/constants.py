"""Physical constants shared across the simulator.

Distances are kilometres, angles degrees and time seconds unless a name
says otherwise.
"""

# Earth gravitational parameter, km^3/s^2 (WGS-84 value)
MU_EARTH = 3.986004418e5

# Mean equatorial Earth radius for the spherical-Earth model, km
EARTH_RADIUS = 6378.14

# Earth rotation rate, rad/s (sidereal)
EARTH_ROTATION_RATE = 7.2921159e-5

# Speed of light, km/s
SPEED_OF_LIGHT = 299792.458

# Boltzmann constant expressed in dBW/(K*Hz); enters the CNR equation
# as +228.6 dB.
BOLTZMANN_DB = -228.6
