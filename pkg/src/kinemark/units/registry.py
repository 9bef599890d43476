import jpu

unit_registry = jpu.UnitRegistry()

# Head-tracking channels are recorded in centimeters (X, Y, Z) and degrees
# (Pitch, Roll, Yaw); the derivative orders carry these over seconds**k
POSITION_UNIT = unit_registry.cm
ANGLE_UNIT = unit_registry.deg
TIME_UNIT = unit_registry.s
RATE_UNIT = unit_registry.Hz
