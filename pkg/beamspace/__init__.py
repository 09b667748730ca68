"""Same-beampattern beamforming vector families for MIMO-radar transmit beamspace design."""

__version__ = "0.1.0"
