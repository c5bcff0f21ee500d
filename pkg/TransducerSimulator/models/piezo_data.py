"""
Data models for the electromechanical side of the transducer.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class BvdParams:
    """Butterworth-Van Dyke circuit: C0 in parallel with a motional Lm-Cm-Rm branch."""
    C0: float
    Cm: float
    Lm: float
    Rm: float

    @classmethod
    def from_coupling(cls, C0: float, k_eff2: float, omega_m: float, gamma_0: float) -> "BvdParams":
        Cm = k_eff2 * C0
        Lm = 1.0 / (omega_m ** 2 * Cm)
        return cls(C0=C0, Cm=Cm, Lm=Lm, Rm=Lm * gamma_0)

    @property
    def k_eff2(self) -> float:
        return self.Cm / self.C0


@dataclass(frozen=True)
class PortRates:
    """Microwave port rates [rad/s]."""
    Gamma_ex: float
    Gamma_0: float

    @property
    def Gamma(self) -> float:
        return self.Gamma_ex + self.Gamma_0

    @property
    def overcoupling(self) -> float:
        return self.Gamma_ex / self.Gamma


@dataclass(frozen=True)
class EffectiveMechanics:
    """
    Mechanical mode after adiabatic elimination of the microwave mode.

    gamma_m and gamma_ex are the exact complex values at s; the *_res fields
    are magnitudes at s = -i*omega_m and are what the network consumes.
    """
    s: complex
    gamma_m: complex
    gamma_ex: complex
    sqrt_gamma_ex: complex
    gamma_m_res: float
    gamma_ex_res: float
    sqrt_gamma_ex_res: complex

    @property
    def gamma_noise(self) -> float:
        """Intrinsic mechanical port rate, the part of gamma_m not leaking into the line."""
        return self.gamma_m_res - self.gamma_ex_res


@dataclass(frozen=True)
class BvdExtraction:
    """Result of reading a BVD circuit back from an admittance spectrum."""
    omega_s: float
    omega_p: float
    omega_mid: float
    k_eff2_extrema: float
    omega_m: float
    gamma_0: float
    k_eff2: float
    bvd: BvdParams

    @property
    def quality_factor(self) -> float:
        return self.omega_m / self.gamma_0

    @property
    def figure_of_merit(self) -> float:
        return self.k_eff2 * self.quality_factor / (1.0 - self.k_eff2)
