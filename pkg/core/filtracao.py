"""
Constantes da filtração {V+, V-, W} e verificação amostral das inclusões.

    V+ = {R <= |z|, c|w| <= |z|}
    V- = {R <= c|w|, |z| <= c|w|}
    W  = {|z| <= R, c|w| <= R}

com c = c_vplus. Dois modos:
    PaperFaithful - R vem de limitantes fechados sobre os coeficientes;
    Relaxed       - R é a menor potência de 2 que passa na verificação amostral.
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum

import numpy as np

from .exceptions import FiltrationViolation
from .green import GreenParams, green_many

logger = logging.getLogger(__name__)

C_G_PADRAO = 0.1
FATOR_R_PHI = 4.04
# sqrt(1 + ||g||^2) com ||g|| < 1/100
FATOR_CONJUGACAO = math.sqrt(1.0 + 1e-4)
MAX_EXPOENTE_R = 1000
AMOSTRAS_RELAXED = 100_000
LOG_ESTOURO = 150.0
MAX_TESTEMUNHAS = 10


class Modo(str, Enum):
    PAPER_FAITHFUL = 'PaperFaithful'
    RELAXED = 'Relaxed'


class Regiao(str, Enum):
    VPLUS = 'VPlus'
    VMINUS = 'VMinus'
    W = 'W'
    AMBIGUOUS = 'Ambiguous'


@dataclass(frozen=True)
class FiltrationConstants:
    R: float
    c_vplus: float
    c_phi: float
    r_phi: float
    c_g: float = C_G_PADRAO
    mode: Modo = Modo.RELAXED

    def __post_init__(self):
        object.__setattr__(self, 'mode', Modo(self.mode))
        if not self.R > 1:
            raise ValueError(f"R deve ser > 1 (recebido {self.R})")
        if not (self.c_phi > 0 and self.r_phi > 0):
            raise ValueError("c_phi e r_phi devem ser positivos")
        if not self.c_vplus > 1.0 / self.c_phi:
            raise ValueError(f"c_vplus = {self.c_vplus} deve exceder 1/c_phi = {1.0 / self.c_phi}")
        if self.c_g < 0:
            raise ValueError("c_g deve ser >= 0")
        if self.mode == Modo.PAPER_FAITHFUL:
            if not self.c_phi < self.r_phi / 4:
                raise ValueError("modo PaperFaithful exige c_phi < r_phi/4")
            if not self.c_phi < 0.01:
                raise ValueError("modo PaperFaithful exige c_phi < 1/100")

    def with_c_g(self, c_g):
        return replace(self, c_g=float(c_g))

    def as_dict(self):
        dados = asdict(self)
        dados['mode'] = self.mode.value
        return dados


# ----------------------------------------------------------------------
# Regiões
# ----------------------------------------------------------------------
def em_vplus(z, w, k):
    az, aw = abs(z), abs(w)
    return az >= k.R and k.c_vplus * aw <= az


def em_vminus(z, w, k):
    az, aw = abs(z), abs(w)
    return k.c_vplus * aw >= k.R and az <= k.c_vplus * aw


def em_w(z, w, k):
    return abs(z) <= k.R and k.c_vplus * abs(w) <= k.R


def region_of(p, k):
    """Região de p com prioridade V+ > V- > W nas fronteiras"""
    if em_vplus(p.z, p.w, k):
        return Regiao.VPLUS
    if em_vminus(p.z, p.w, k):
        return Regiao.VMINUS
    if em_w(p.z, p.w, k):
        return Regiao.W
    return Regiao.AMBIGUOUS


def _vplus_array(z, w, k):
    az, aw = np.abs(z), np.abs(w)
    return (az >= k.R) & (k.c_vplus * aw <= az)


def _vminus_array(z, w, k):
    az, aw = np.abs(z), np.abs(w)
    return (k.c_vplus * aw >= k.R) & (az <= k.c_vplus * aw)


# ----------------------------------------------------------------------
# Escolha das constantes
# ----------------------------------------------------------------------
def _soma_coef(fator, r):
    """S(r) = Σ_{k<d} |c_k| r^k"""
    return sum(abs(c) * r ** k for k, c in enumerate(fator.coeffs[:-1]))


def _soma_coef_derivada(fator, r):
    """S'(r) = Σ_{1<=k<d} k |c_k| r^(k-1)"""
    return sum(k * abs(c) * r ** (k - 1) for k, c in enumerate(fator.coeffs[:-1]) if k >= 1)


def _condicoes_fator(fator, R, c_v):
    d = fator.degree
    modulo_a = abs(fator.a)
    rho = R / c_v
    condicoes = {
        'aproximacao_p': _soma_coef(fator, rho) + c_v * rho <= rho ** d / 2,
        'derivada_superior': _soma_coef_derivada(fator, rho) + rho <= d * rho ** (d - 1),
        'limitante_R': R >= 2 ** (d + 5) * 9 * math.sqrt(41) * (1 + modulo_a) ** 2 * c_v ** d * FATOR_CONJUGACAO,
        'tricotomia_frente': R ** (d - 1) > 2 * modulo_a / c_v,
        'tricotomia_tras': rho ** (d - 1) > 2 * modulo_a,
    }
    if d > 2 or fator.coeffs[1] == 0:
        condicoes['derivada_inferior'] = _soma_coef_derivada(fator, rho) + rho <= d * rho ** (d - 1) / 2
    return condicoes


def _R_fiel_fator(fator, c_v):
    d = fator.degree
    if d == 2 and fator.coeffs[1] != 0:
        logger.warning(
            f"Grau 2 com coeficiente linear {fator.coeffs[1]}: "
            "limitante inferior de |p'| não pode valer, condição ignorada"
        )
    for expoente in range(1, MAX_EXPOENTE_R + 1):
        R = 2.0 ** expoente
        if all(_condicoes_fator(fator, R, c_v).values()):
            return R
    raise ValueError(f"nenhuma potência de 2 até 2^{MAX_EXPOENTE_R} satisfaz as condições do fator")


def _constantes_fieis(sys):
    c_phi = 1.0 / 128
    c_v = 1.0 / c_phi + 1.0
    R = max(_R_fiel_fator(f, c_v) for f in sys.factors)
    return FiltrationConstants(R, c_v, c_phi, FATOR_R_PHI * c_phi, C_G_PADRAO, Modo.PAPER_FAITHFUL)


def choose_constants(sys, mode=Modo.RELAXED, seed=0, n_samples=AMOSTRAS_RELAXED):
    mode = Modo(mode)
    fieis = _constantes_fieis(sys)
    if mode == Modo.PAPER_FAITHFUL:
        logger.info(f"Constantes PaperFaithful: R = 2^{int(math.log2(fieis.R))}, c_vplus = {fieis.c_vplus}")
        return fieis

    c_phi = 0.25
    c_v = 5.0
    expoente = 1
    while True:
        R = 2.0 ** expoente
        if R >= fieis.R:
            logger.warning("Busca Relaxed chegou ao R PaperFaithful; usando-o")
            R = fieis.R
            break
        candidato = FiltrationConstants(R, c_v, c_phi, FATOR_R_PHI * c_phi, C_G_PADRAO, Modo.RELAXED)
        relatorio = verify_filtration(sys, candidato, n_samples, seed=seed)
        if relatorio.violations == 0:
            break
        expoente += 1
    logger.info(f"Constantes Relaxed: R = {R:g}, c_vplus = {c_v}")
    return FiltrationConstants(R, c_v, c_phi, FATOR_R_PHI * c_phi, C_G_PADRAO, Modo.RELAXED)


# ----------------------------------------------------------------------
# Verificação
# ----------------------------------------------------------------------
@dataclass
class RelatorioFiltracao:
    violations: int = 0
    witnesses: list = field(default_factory=list)
    samples: dict = field(default_factory=dict)
    mode: str = Modo.RELAXED.value

    def registrar(self, inclusao, z, w, mask):
        total = int(np.count_nonzero(mask))
        if not total:
            return
        self.violations += total
        for zk, wk in zip(z[mask][:MAX_TESTEMUNHAS], w[mask][:MAX_TESTEMUNHAS]):
            if len(self.witnesses) >= MAX_TESTEMUNHAS:
                break
            self.witnesses.append({
                'inclusao': inclusao,
                'z': [float(zk.real), float(zk.imag)],
                'w': [float(wk.real), float(wk.imag)],
            })

    def raise_if_violated(self):
        if self.violations:
            primeira = self.witnesses[0]
            raise FiltrationViolation(primeira, primeira['inclusao'], self.violations)

    def as_dict(self):
        return {
            'violations': self.violations,
            'witnesses': self.witnesses,
            'samples': self.samples,
            'mode': self.mode,
        }


def _disco(rng, n, raio):
    """Uniforme no disco de raio `raio` (array)"""
    return raio * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def _amostrar_vplus(rng, n, k):
    modulo = k.R * 10.0 ** (4 * rng.random(n))
    z = modulo * np.exp(2j * np.pi * rng.random(n))
    w = _disco(rng, n, modulo / k.c_vplus)
    return z, w


def _amostrar_vminus(rng, n, k):
    modulo = (k.R / k.c_vplus) * 10.0 ** (4 * rng.random(n))
    w = modulo * np.exp(2j * np.pi * rng.random(n))
    z = _disco(rng, n, k.c_vplus * modulo)
    return w, z


def _checar_uplus(sys, k, rng, n, max_iter):
    """Pontos que escapam precisam passar por V+ antes de estourar"""
    meia_largura = min(2.0 * k.R, 1e3)
    z = meia_largura * ((2 * rng.random(n) - 1) + 1j * (2 * rng.random(n) - 1))
    w = meia_largura * ((2 * rng.random(n) - 1) + 1j * (2 * rng.random(n) - 1))
    z0, w0 = z.copy(), w.copy()
    chegou = _vplus_array(z, w, k)
    estourou = np.zeros(n, dtype=bool)
    ativo = ~chegou
    with np.errstate(all='ignore'):
        for _ in range(max_iter):
            if not ativo.any():
                break
            for fator in sys.factors:
                z[ativo], w[ativo] = fator.p(z[ativo]) - fator.a * w[ativo], z[ativo]
                entrou = ativo & _vplus_array(z, w, k)
                chegou |= entrou
                ativo &= ~entrou
                norma = np.maximum(np.abs(z), np.abs(w))
                grande = ativo & ~(np.log(norma) < LOG_ESTOURO)
                estourou |= grande
                ativo &= ~grande
    return z0, w0, chegou, estourou


def verify_filtration(sys, k, n_samples, seed=0, max_iter=400):
    """Amostra V+, V- e U+ e conta violações das inclusões da filtração.

    Cada fator é testado separadamente: f_i(V+) ⊆ V+ e f_i^-1(V-) ⊆ V-.
    """
    if n_samples < 1:
        raise ValueError("n_samples deve ser >= 1")
    rng = np.random.default_rng(seed)
    relatorio = RelatorioFiltracao(mode=k.mode.value)

    z, w = _amostrar_vplus(rng, n_samples, k)
    with np.errstate(all='ignore'):
        for fator in sys.factors:
            z1, w1 = fator.p(z) - fator.a * w, z
            relatorio.registrar('f(V+) ⊆ V+', z, w, ~_vplus_array(z1, w1, k))
    relatorio.samples['vplus'] = n_samples

    w, z = _amostrar_vminus(rng, n_samples, k)
    with np.errstate(all='ignore'):
        for fator in sys.factors:
            z1, w1 = w, (fator.p(w) - z) / fator.a
            relatorio.registrar('f^-1(V-) ⊆ V-', z, w, ~_vminus_array(z1, w1, k))
    relatorio.samples['vminus'] = n_samples

    n_uplus = max(1, n_samples // 10)
    z0, w0, chegou, estourou = _checar_uplus(sys, k, rng, n_uplus, max_iter)
    relatorio.registrar('U+ alcança V+', z0, w0, estourou)
    relatorio.samples['uplus'] = int(np.count_nonzero(chegou | estourou))

    logger.info(
        f"Filtração ({k.mode.value}, R={k.R:g}): {relatorio.violations} violação(ões) "
        f"em {n_samples} amostras por inclusão"
    )
    return relatorio


# ----------------------------------------------------------------------
# Menor nível c admissível
# ----------------------------------------------------------------------
def grade_w(k, n_pontos):
    """Grade polar em W com cerca de n_pontos (inclui a fronteira)"""
    m = max(2, math.ceil(n_pontos ** 0.25))
    raios = np.linspace(0.0, 1.0, m)
    angulos = np.linspace(0.0, 2 * math.pi, m, endpoint=False)
    rz, az, rw, aw = np.meshgrid(raios * k.R, angulos, raios * k.R / k.c_vplus, angulos, indexing='ij')
    return (rz * np.exp(1j * az)).ravel(), (rw * np.exp(1j * aw)).ravel()


def min_large_c(sys, k, n_pontos=10_000, params=None):
    """Menor c com c > max_W g+ (mais a soma sobre as imagens de W na composição), R < e^c
    e (|a| c_phi/d + 1) < c_phi e^c / 8."""
    params = (params or GreenParams()).for_constants(k)
    z, w = grade_w(k, n_pontos)
    valores, _, _ = green_many(sys, z, w, params)
    maximo = float(valores.max())

    if sys.N > 1:
        for i in range(sys.N):
            zi, wi = z.copy(), w.copy()
            with np.errstate(all='ignore'):
                for fator in sys.factors[i:]:
                    zi, wi = fator.p(zi) - fator.a * wi, zi
            imagens, _, _ = green_many(sys, zi, wi, params)
            maximo += float(imagens.max())

    candidatos = (
        1.1 * maximo,
        math.log(k.R),
        math.log(8.0 * (abs(sys.a) * k.c_phi / sys.d + 1.0) / k.c_phi),
    )
    c = max(candidatos)
    c += 1e-9 * max(1.0, c)
    logger.info(f"c mínimo = {c:.6g} (max_W g+ = {maximo:.6g}, log R = {math.log(k.R):.6g})")
    return c
