"""
Núcleo dos mapas de Hénon generalizados f(z, w) = (p(z) - a w, z).

Um HenonSystem é a composição f_N ∘ ... ∘ f_1 (f_1 aplicado primeiro).
As operações valem tanto para coordenadas `complex` quanto `mpmath.mpc`.
"""

import cmath
import json
import logging
import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import mpmath

from .exceptions import Degenerate, IndeterminacyPoint, MapDefinitionError, RangeOverflow
from .extcomplex import ExtComplex

logger = logging.getLogger(__name__)

# acima disso o passo comum é refeito em ExtComplex
LIMIAR_EXT = 1e280
# abaixo disso (em log) volta para aritmética comum
LOG_RETORNO_COMUM = 500.0


def _finito(valor):
    if isinstance(valor, complex):
        return cmath.isfinite(valor)
    if isinstance(valor, (mpmath.mpc, mpmath.mpf)):
        return mpmath.isfinite(valor)
    return math.isfinite(abs(valor))


def _modulo(valor):
    return abs(valor)


# ----------------------------------------------------------------------
# Fatores e sistemas
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class HenonFactor:
    """Um fator (p, a): coeficientes de p do termo constante para cima, p mônico."""

    coeffs: tuple
    a: complex

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) < 3:
            raise MapDefinitionError(f"grau de p deve ser >= 2 (recebido {len(coeffs) - 1})")
        if coeffs[-1] != 1:
            raise MapDefinitionError(f"p deve ser mônico, coeficiente líder = {coeffs[-1]}")
        if not all(cmath.isfinite(c) for c in coeffs):
            raise MapDefinitionError("coeficientes de p devem ser finitos")
        a = complex(self.a)
        if a == 0 or not cmath.isfinite(a):
            raise MapDefinitionError(f"a deve ser não nulo e finito (recebido {a})")
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'a', a)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def p(self, z):
        acc = 1
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    def dp(self, z):
        d = self.degree
        acc = d
        for k in range(d - 1, 0, -1):
            acc = acc * z + k * self.coeffs[k]
        return acc

    def homogeneo(self, z, t):
        """H(z, t) = t^d p(z/t) = Σ c_k z^k t^(d-k)"""
        d = self.degree
        return sum(c * z ** k * t ** (d - k) for k, c in enumerate(self.coeffs))

    def forward(self, z, w):
        return self.p(z) - self.a * w, z

    def inverse(self, z, w):
        return w, (self.p(w) - z) / self.a

    def as_dict(self):
        return {
            'coeffs': [[c.real, c.imag] for c in self.coeffs],
            'a': [self.a.real, self.a.imag],
        }


@dataclass(frozen=True)
class HenonSystem:
    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise MapDefinitionError("o sistema precisa de pelo menos um fator")
        object.__setattr__(self, 'factors', factors)

    @property
    def d(self):
        return reduce(lambda acc, f: acc * f.degree, self.factors, 1)

    @property
    def a(self):
        return reduce(lambda acc, f: acc * f.a, self.factors, 1 + 0j)

    @property
    def N(self):
        return len(self.factors)

    # ------------------------------------------------------------------
    # construção
    # ------------------------------------------------------------------
    @classmethod
    def quadratic(cls, c=0, a=1):
        """p(z) = z² + c"""
        return cls((HenonFactor((c, 0, 1), a),))

    @classmethod
    def benchmark(cls):
        return cls.quadratic(0, 1)

    @classmethod
    def from_dict(cls, dados):
        try:
            fatores = []
            for item in dados['factors']:
                coeffs = [_ler_complexo(c) for c in item['coeffs']]
                fatores.append(HenonFactor(tuple(coeffs), _ler_complexo(item['a'])))
        except MapDefinitionError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise MapDefinitionError(f"documento de mapa mal formado: {e}") from e
        return cls(tuple(fatores))

    @classmethod
    def from_json(cls, caminho):
        caminho = Path(caminho)
        try:
            dados = json.loads(caminho.read_text(encoding='utf-8'))
        except json.JSONDecodeError as e:
            raise MapDefinitionError(f"{caminho.name}: JSON inválido ({e})") from e
        return cls.from_dict(dados)

    def as_dict(self):
        return {'factors': [f.as_dict() for f in self.factors]}

    def __str__(self):
        return f"HenonSystem(N={self.N}, d={self.d}, a={self.a})"


def _ler_complexo(valor):
    if isinstance(valor, (list, tuple)):
        if len(valor) != 2:
            raise MapDefinitionError(f"número complexo deve ser [re, im], recebido {valor}")
        return complex(float(valor[0]), float(valor[1]))
    return complex(valor)


# ----------------------------------------------------------------------
# Pontos
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class AffinePoint:
    z: complex
    w: complex

    def as_tuple(self):
        return self.z, self.w

    def to_complex(self):
        return AffinePoint(complex(self.z), complex(self.w))

    def to_mp(self):
        return AffinePoint(mpmath.mpc(self.z), mpmath.mpc(self.w))

    @property
    def norma(self):
        return max(_modulo(self.z), _modulo(self.w))


@dataclass(frozen=True)
class Tangent:
    base: AffinePoint
    dz: complex
    dw: complex


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """[z : w : t] normalizado pela coordenada de maior módulo (empates: z, w, t)."""

    z: complex
    w: complex
    t: complex

    @classmethod
    def of(cls, z, w, t):
        coords = (z, w, t)
        modulos = [_modulo(c) for c in coords]
        maior = max(modulos)
        if maior == 0:
            raise ValueError("[0:0:0] não é um ponto projetivo")
        pivo = coords[modulos.index(maior)]
        return cls(*(c / pivo for c in coords))

    @classmethod
    def from_affine(cls, p):
        return cls.of(p.z, p.w, 1)

    def to_affine(self):
        if self.t == 0:
            raise ZeroDivisionError("ponto na reta do infinito")
        return AffinePoint(self.z / self.t, self.w / self.t)

    def same_as(self, outro, tol=1e-12):
        pares = ((self.z, self.w, outro.z, outro.w),
                 (self.z, self.t, outro.z, outro.t),
                 (self.w, self.t, outro.w, outro.t))
        return all(_modulo(a * d - b * c) <= tol for a, b, c, d in pares)

    def __eq__(self, outro):
        if not isinstance(outro, ProjPoint):
            return NotImplemented
        return self.same_as(outro)

    def __hash__(self):
        return hash(tuple(round(abs(c), 9) for c in (self.z, self.w, self.t)))


I_PLUS = ProjPoint(0j, 1 + 0j, 0j)
I_MINUS = ProjPoint(1 + 0j, 0j, 0j)


# ----------------------------------------------------------------------
# Aplicação
# ----------------------------------------------------------------------
def _checar_faixa(z, w):
    if not (_finito(z) and _finito(w)):
        raise RangeOverflow(f"órbita saiu da faixa de ponto flutuante: ({z}, {w})")


def apply_forward(sys, p):
    z, w = p.z, p.w
    try:
        for fator in sys.factors:
            z, w = fator.forward(z, w)
    except OverflowError as e:
        raise RangeOverflow(str(e)) from e
    _checar_faixa(z, w)
    return AffinePoint(z, w)


def apply_inverse(sys, p):
    z, w = p.z, p.w
    try:
        for fator in reversed(sys.factors):
            z, w = fator.inverse(z, w)
    except OverflowError as e:
        raise RangeOverflow(str(e)) from e
    _checar_faixa(z, w)
    return AffinePoint(z, w)


def iterate(sys, p, n, direction=1):
    passo = apply_forward if direction > 0 else apply_inverse
    for _ in range(n):
        p = passo(sys, p)
    return p


def extend_forward_proj(sys, q):
    for indice, fator in enumerate(sys.factors):
        z, w, t = q.z, q.w, q.t
        d = fator.degree
        t_d1 = t ** (d - 1)
        novo = (fator.homogeneo(z, t) - fator.a * w * t_d1, z * t_d1, t ** d)
        if all(c == 0 for c in novo):
            raise IndeterminacyPoint(q, indice + 1)
        q = ProjPoint.of(*novo)
    return q


def extend_inverse_proj(sys, q):
    for indice in range(sys.N - 1, -1, -1):
        fator = sys.factors[indice]
        z, w, t = q.z, q.w, q.t
        d = fator.degree
        t_d1 = t ** (d - 1)
        novo = (w * t_d1, (fator.homogeneo(w, t) - z * t_d1) / fator.a, t ** d)
        if all(c == 0 for c in novo):
            raise IndeterminacyPoint(q, indice + 1)
        q = ProjPoint.of(*novo)
    return q


# ----------------------------------------------------------------------
# Jacobianas (matrizes 2x2 como tuplas de linhas)
# ----------------------------------------------------------------------
def mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_vec(m, v):
    (a, b), (c, d) = m
    x, y = v
    return a * x + b * y, c * x + d * y


def det(m):
    (a, b), (c, d) = m
    return a * d - b * c


IDENTIDADE = ((1, 0), (0, 1))


def jacobian_forward(sys, p):
    z, w = p.z, p.w
    jac = IDENTIDADE
    for fator in sys.factors:
        local = ((fator.dp(z), -fator.a), (1, 0))
        jac = mat_mul(local, jac)
        z, w = fator.forward(z, w)
    return jac


def jacobian_inverse(sys, p):
    # D f^-1 = [[0, 1], [-1/a, p'(w)/a]]
    z, w = p.z, p.w
    jac = IDENTIDADE
    for fator in reversed(sys.factors):
        local = ((0, 1), (-1 / fator.a, fator.dp(w) / fator.a))
        jac = mat_mul(local, jac)
        z, w = fator.inverse(z, w)
    return jac


def push_tangent(sys, v, direction=1):
    """Empurra o vetor tangente por f (ou f^-1) usando a jacobiana exata."""
    if direction > 0:
        jac, base = jacobian_forward(sys, v.base), apply_forward(sys, v.base)
    else:
        jac, base = jacobian_inverse(sys, v.base), apply_inverse(sys, v.base)
    dz, dw = mat_vec(jac, (v.dz, v.dw))
    return Tangent(base, dz, dw)


# ----------------------------------------------------------------------
# Iteração em faixa estendida
# ----------------------------------------------------------------------
def _p_ext(fator, x):
    acc = ExtComplex(0.0, 0.0)
    for c in reversed(fator.coeffs[:-1]):
        acc = acc * x + c
    return acc


def _dominante_menos(fator, x, y, coef):
    """x^d (1 + u) - coef * y com u pequeno; None quando x não domina"""
    if x.is_zero or x.log_mag < 1.0:
        return None
    d = fator.degree
    u = 0j
    for j, c in enumerate(fator.coeffs[:-1]):
        if c == 0:
            continue
        termo = x ** (j - d) * c
        if termo.log_mag > 0:
            return None
        u += termo.to_complex()
    if not y.is_zero:
        termo = -(y * coef) / x ** d
        if termo.log_mag > 0:
            return None
        u += termo.to_complex()
    if abs(u) >= 0.5:
        return None
    return x ** d * ExtComplex.from_complex(1 + u)


def passo_ext(fator, zx, wx, direction=1):
    """Um passo de fator sobre um par ExtComplex"""
    if direction > 0:
        novo = _dominante_menos(fator, zx, wx, fator.a)
        if novo is None:
            novo = _p_ext(fator, zx) - wx * fator.a
        return novo, zx
    novo = _dominante_menos(fator, wx, zx, 1)
    if novo is None:
        novo = _p_ext(fator, wx) - zx
    return wx, novo / fator.a


def _passo_comum(fator, z, w, direction):
    try:
        z1, w1 = fator.forward(z, w) if direction > 0 else fator.inverse(z, w)
    except OverflowError:
        return None
    if not (cmath.isfinite(z1) and cmath.isfinite(w1)):
        return None
    if max(abs(z1), abs(w1)) > LIMIAR_EXT:
        return None
    return z1, w1


def iterate_ext(sys, p, n, direction=1):
    """f^n (ou f^-n) de p devolvido como par de ExtComplex.

    Passos comuns enquanto cabem em double; ao sair da faixa o passo é
    refeito em ExtComplex, e a iteração volta ao modo comum quando os dois
    módulos ficam abaixo de exp(500).
    """
    if n < 0:
        raise ValueError("n deve ser >= 0")
    fatores = sys.factors if direction > 0 else tuple(reversed(sys.factors))
    comum = (complex(p.z), complex(p.w))
    ext = None
    if not all(cmath.isfinite(c) for c in comum):
        raise RangeOverflow(f"ponto inicial fora da faixa: {p}")

    for _ in range(n):
        for fator in fatores:
            if comum is not None:
                resultado = _passo_comum(fator, *comum, direction)
                if resultado is not None:
                    comum = resultado
                    continue
                ext = (ExtComplex.from_complex(comum[0]), ExtComplex.from_complex(comum[1]))
                comum = None
            zx, wx = ext
            base = zx if direction > 0 else wx
            if base.is_zero:
                if not (zx.representable and wx.representable):
                    raise Degenerate(f"coordenada nula com a outra fora da faixa: {ext}")
                logger.warning("Coordenada nula no modo estendido, passo feito em aritmética comum")
                z0, w0 = zx.to_complex(), wx.to_complex()
                z1, w1 = fator.forward(z0, w0) if direction > 0 else fator.inverse(z0, w0)
                ext = (ExtComplex.from_complex(z1), ExtComplex.from_complex(w1))
            else:
                ext = passo_ext(fator, zx, wx, direction)
            zx, wx = ext
            if zx.log_mag < LOG_RETORNO_COMUM and wx.log_mag < LOG_RETORNO_COMUM:
                comum = (zx.to_complex(), wx.to_complex())
                ext = None

    if comum is not None:
        return ExtComplex.from_complex(comum[0]), ExtComplex.from_complex(comum[1])
    return ext
