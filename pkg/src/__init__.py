"""
cvbell - two-mode Gaussian entanglement and phase-space Bell toolkit
Covariance-matrix criteria, CHSH parity tests and loss-channel decoherence
"""

__version__ = "1.0.0"
__author__ = "cvbell developers"
__description__ = "Entanglement versus Bell nonlocality for two-mode Gaussian states"
