"""
Escalar complexo de faixa estendida: log do módulo + fase.

Usado quando |z| chega a exp(c * d^n), muito além do que um double aguenta.
"""

import cmath
import math
from dataclasses import dataclass

import mpmath

DOIS_PI = 2.0 * math.pi
# exp(709.78) é o maior double
LOG_MAX_DOUBLE = 709.0


def normalizar_fase(fase):
    """Leva a fase para (-pi, pi]"""
    f = math.remainder(fase, DOIS_PI)
    if f <= -math.pi:
        f += DOIS_PI
    return f


@dataclass(frozen=True)
class ExtComplex:
    log_mag: float
    phase: float = 0.0

    def __post_init__(self):
        if math.isnan(self.log_mag) or self.log_mag == math.inf:
            raise ValueError(f"log_mag inválido: {self.log_mag}")
        object.__setattr__(self, 'phase', normalizar_fase(float(self.phase)))

    # ------------------------------------------------------------------
    # conversões
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls(-math.inf, 0.0)

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        if z == 0:
            return cls.zero()
        if not cmath.isfinite(z):
            raise ValueError(f"valor não finito: {z}")
        escala = max(abs(z.real), abs(z.imag))
        log_mag = math.log(escala) + math.log(abs(z / escala))
        return cls(log_mag, cmath.phase(z))

    @classmethod
    def from_mpc(cls, z):
        z = mpmath.mpc(z)
        if z == 0:
            return cls.zero()
        return cls(float(mpmath.log(abs(z))), float(mpmath.arg(z)))

    @property
    def is_zero(self):
        return self.log_mag == -math.inf

    @property
    def representable(self):
        return self.log_mag <= LOG_MAX_DOUBLE

    def to_complex(self):
        if self.is_zero:
            return 0j
        if self.log_mag > LOG_MAX_DOUBLE:
            raise OverflowError(f"|z| = exp({self.log_mag:.6g}) fora da faixa de double")
        return cmath.rect(math.exp(self.log_mag), self.phase)

    def to_mpc(self):
        if self.is_zero:
            return mpmath.mpc(0)
        return mpmath.exp(mpmath.mpf(self.log_mag)) * mpmath.expjpi(mpmath.mpf(self.phase) / mpmath.pi)

    # ------------------------------------------------------------------
    # aritmética
    # ------------------------------------------------------------------
    def __mul__(self, outro):
        outro = _como_ext(outro)
        if self.is_zero or outro.is_zero:
            return ExtComplex.zero()
        return ExtComplex(self.log_mag + outro.log_mag, self.phase + outro.phase)

    __rmul__ = __mul__

    def __truediv__(self, outro):
        outro = _como_ext(outro)
        if outro.is_zero:
            raise ZeroDivisionError("divisão de ExtComplex por zero")
        if self.is_zero:
            return ExtComplex.zero()
        return ExtComplex(self.log_mag - outro.log_mag, self.phase - outro.phase)

    def __neg__(self):
        if self.is_zero:
            return self
        return ExtComplex(self.log_mag, self.phase + math.pi)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("ExtComplex só aceita potência inteira")
        if n == 0:
            return ExtComplex(0.0, 0.0)
        if self.is_zero:
            if n < 0:
                raise ZeroDivisionError("potência negativa de zero")
            return self
        return ExtComplex(n * self.log_mag, n * self.phase)

    def __add__(self, outro):
        outro = _como_ext(outro)
        if self.is_zero:
            return outro
        if outro.is_zero:
            return self
        # pivô no de maior módulo
        maior, menor = (self, outro) if self.log_mag >= outro.log_mag else (outro, self)
        razao = cmath.rect(math.exp(menor.log_mag - maior.log_mag), menor.phase - maior.phase)
        soma = 1.0 + razao
        if soma == 0:
            return ExtComplex.zero()
        # log|1 + r| = log1p(2 Re r + |r|^2) / 2
        correcao = 0.5 * math.log1p(2.0 * razao.real + abs(razao) ** 2)
        return ExtComplex(maior.log_mag + correcao, maior.phase + cmath.phase(soma))

    __radd__ = __add__

    def __sub__(self, outro):
        return self + (-_como_ext(outro))

    def __rsub__(self, outro):
        return _como_ext(outro) + (-self)

    def __abs__(self):
        return ExtComplex(self.log_mag, 0.0) if not self.is_zero else self

    def isclose(self, outro, rel_tol=1e-12):
        """Compara como números complexos, com tolerância relativa ao maior módulo"""
        outro = _como_ext(outro)
        if self.is_zero or outro.is_zero:
            return self.is_zero and outro.is_zero
        diferenca = self - outro
        escala = max(self.log_mag, outro.log_mag)
        return diferenca.is_zero or diferenca.log_mag - escala <= math.log(rel_tol)


def _como_ext(valor):
    if isinstance(valor, ExtComplex):
        return valor
    if isinstance(valor, (mpmath.mpc, mpmath.mpf)):
        return ExtComplex.from_mpc(valor)
    return ExtComplex.from_complex(valor)
