"""
Forma normal perto de I- e família de discos analíticos nas folhas de {g+ = c}.

O disco de profundidade n é montado na zona profunda: Q = f^n(P) é deslocado
verticalmente (w -> w_Q + ρθ, ρ = (c_phi/2)|z_Q|), projetado de volta na folha
por Newton em z e puxado de volta com f^-n. Tudo em mpmath, com precisão
proporcional a log|z_Q|.
"""

import cmath
import logging
import math
from dataclasses import dataclass, replace

import mpmath
import numpy as np
from scipy.spatial import cKDTree

from .exceptions import BranchAmbiguity, DepthInsufficient, HenonError, ProjectionDiverged, TruncationLoss
from .filtracao import Regiao, region_of
from .green import GreenParams, bottcher_x, green_plus_precise, level_set_seed, telescopar_mp
from .henon import AffinePoint, iterate_ext, jacobian_inverse, mat_vec

logger = logging.getLogger(__name__)

LOG_PROFUNDO_MIN = 30.0
MAX_PROFUNDIDADE = 64
MAX_NEWTON = 50
LIMIAR_TRUNCAGEM = 1e-9


# ----------------------------------------------------------------------
# Transição de cartas
# ----------------------------------------------------------------------
def psi(p):
    """(z, w) -> (1/z, w/z)"""
    if p.z == 0:
        raise ZeroDivisionError("psi indefinida em z = 0")
    return 1 / p.z, p.w / p.z


def psi_inverse(v):
    zeta, omega = v
    if zeta == 0:
        raise ZeroDivisionError("psi^-1 indefinida em ζ = 0")
    return AffinePoint(1 / zeta, omega / zeta)


# ----------------------------------------------------------------------
# Mapa modelo G(x, y) = (x^d, (a/d) y x^(2d-2) + x^(d-1) (1 + r(x)))
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ModelMapG:
    d: int
    a: complex
    r_coeffs: tuple = (0,)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d deve ser >= 2")
        if self.a == 0:
            raise ValueError("a deve ser não nulo")
        coeffs = tuple(complex(c) for c in (self.r_coeffs or (0,)))
        if coeffs[0] != 0:
            raise ValueError("r deve se anular em 0 (r_coeffs[0] = 0)")
        object.__setattr__(self, 'r_coeffs', coeffs)

    @property
    def A(self):
        return self.a / self.d

    @property
    def r_nulo(self):
        return all(c == 0 for c in self.r_coeffs)

    @property
    def ordem_r(self):
        return len(self.r_coeffs) - 1

    def r(self, x):
        acc = 0
        for c in reversed(self.r_coeffs):
            acc = acc * x + c
        return acc

    def apply(self, v):
        x, y = v
        d = self.d
        return x ** d, self.A * y * x ** (2 * d - 2) + x ** (d - 1) * (1 + self.r(x))


def model_G_apply(G, v):
    return G.apply(v)


def _eh_mp(*valores):
    return any(isinstance(v, (mpmath.mpc, mpmath.mpf)) for v in valores)


def _checar_truncagem(G, xs, divisor=1):
    if G.r_nulo:
        return
    estimativa = max(abs(x) ** (G.ordem_r + 1) for x in xs) / abs(divisor)
    if estimativa > LIMIAR_TRUNCAGEM:
        raise TruncationLoss(
            f"termo desprezado de r estimado em {float(estimativa):.3g} > {LIMIAR_TRUNCAGEM:g}"
        )


def model_G_pow(G, v, n, x_root=None):
    """G^n para n inteiro com sinal.

    Para n < 0 usa a forma fechada G^-m(x^(d^m), y) = (x, (y - Q_m(x)) / (A^m x^(q_m))),
    q_m = 2(d^m - 1), com Q_m pela recursão da segunda coordenada. A raiz
    d^m-ésima de x é a principal, a menos que `x_root` seja informado.
    """
    if n >= 0:
        xs = []
        for _ in range(n):
            xs.append(v[0])
            v = G.apply(v)
        if xs:
            _checar_truncagem(G, xs)
        return v

    m = -n
    X, Y = v
    if X == 0:
        raise ValueError("G^-n exige x != 0")
    potencia = G.d ** m
    saida_mp = _eh_mp(X, Y, x_root)

    # precisão para a divisão por A^m x^(q_m)
    log10_x = float(mpmath.log10(abs(mpmath.mpc(X)))) / potencia
    q_m = 2 * (potencia - 1)
    log10_mult = m * math.log10(abs(G.A)) + q_m * log10_x
    dps = max(mpmath.mp.dps, 30 + max(0, math.ceil(-log10_mult)))

    with mpmath.workdps(dps):
        Xm, Ym = mpmath.mpc(X), mpmath.mpc(Y)
        if x_root is None:
            x = mpmath.exp(mpmath.log(Xm) / potencia)
        else:
            x = mpmath.mpc(x_root)
            if abs(x ** potencia - Xm) > 1e-9 * abs(Xm):
                raise ValueError(f"x_root^(d^{m}) não reproduz x")
        A = mpmath.mpc(G.A)
        Q = mpmath.mpc(0)
        xk = x
        xs = []
        for _ in range(m):
            xs.append(xk)
            Q = A * Q * xk ** (2 * G.d - 2) + xk ** (G.d - 1) * (1 + G.r(xk))
            xk = xk ** G.d
        multiplicador = A ** m * x ** q_m
        _checar_truncagem(G, xs, multiplicador)
        y = (Ym - Q) / multiplicador
        if saida_mp:
            return x, y
    return complex(x), complex(y)


# ----------------------------------------------------------------------
# Folhas
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class LeafParam:
    c: float
    s_phase: float
    base: AffinePoint
    depth: int

    def with_depth(self, depth):
        return replace(self, depth=depth)


@dataclass(frozen=True)
class DiscSample:
    theta: complex
    point: AffinePoint
    fs_norm: float
    log_fs_norm: float
    region_trace: tuple


def _ext_em_vplus(zx, wx, k):
    return zx.log_mag >= math.log(k.R) and math.log(k.c_vplus) + wx.log_mag <= zx.log_mag


def _limiar_profundo(k):
    # a partir de 4R todo fator 1 + u de Böttcher tem |u| < 1/2
    return max(math.log(1.0 / k.c_phi), LOG_PROFUNDO_MIN, math.log(4.0 * k.R))


def escolher_profundidade(sys, k, base):
    """Menor n com f^n(base) em V+ e log|z| acima do limiar profundo"""
    limiar = _limiar_profundo(k)
    for n in range(MAX_PROFUNDIDADE + 1):
        zx, wx = iterate_ext(sys, base, n)
        if _ext_em_vplus(zx, wx, k) and zx.log_mag >= limiar:
            return n
    raise DepthInsufficient(f"órbita não chega à zona profunda em {MAX_PROFUNDIDADE} passos")


def trace_leaf(sys, k, c, ray=None, depth=None, params=None):
    """Semente no nível c ao longo do raio e LeafParam com a profundidade escolhida"""
    params = (params or GreenParams()).for_constants(k)
    ray = ray or AffinePoint(1 + 0j, 0j)
    base = level_set_seed(sys, c, ray, params)
    if depth is None:
        depth = escolher_profundidade(sys, k, base)
    zq, wq = iterate_ext(sys, base, depth)
    if not _ext_em_vplus(zq, wq, k) or zq.log_mag < math.log(1.0 / k.c_phi):
        raise DepthInsufficient(f"f^{depth}(base) não está na zona profunda de V+")

    fase = None
    if region_of(base, k) == Regiao.VPLUS:
        try:
            fase = bottcher_x(sys, base, params).phase
        except BranchAmbiguity:
            fase = None
    if fase is None:
        x_q = bottcher_x(sys, AffinePoint(zq.to_mpc(), wq.to_mpc()), params)
        fase = x_q.phase / sys.d ** depth
    logger.info(f"Folha no nível c={c:.6g}: profundidade {depth}, fase de s = {fase:.6g}")
    return LeafParam(float(c), float(fase), base, int(depth))


class DiscoFolha:
    """Disco analítico φ_{s,n} de uma folha, avaliado em mpmath.

    Guarda o ponto profundo Q = f^n(P) e a soma telescópica em Q; cada θ
    custa uma projeção de Newton e n passos de f^-1.
    """

    def __init__(self, sys, k, leaf, dps_extra=0):
        self.sys = sys
        self.k = k
        self.leaf = leaf
        self.n = leaf.depth
        zx, wx = iterate_ext(sys, leaf.base, self.n)
        if not _ext_em_vplus(zx, wx, k) or zx.log_mag < math.log(1.0 / k.c_phi):
            raise DepthInsufficient(
                f"f^{self.n}(base) fora da zona profunda (log|z| = {zx.log_mag:.4g})"
            )
        self.log_z_profundo = zx.log_mag
        self.dps = 30 + math.ceil(2.5 * zx.log_mag / math.log(10)) + 2 * self.n + int(dps_extra)
        with mpmath.workdps(self.dps):
            z, w = mpmath.mpc(leaf.base.z), mpmath.mpc(leaf.base.w)
            for _ in range(self.n):
                for fator in sys.factors:
                    z, w = fator.forward(z, w)
            self.z_q, self.w_q = z, w
            self.soma_q = telescopar_mp(sys.factors, z, w, self.dps, True) - mpmath.log(z)
            self.rho = mpmath.mpf(k.c_phi) / 2 * abs(z)
        self._cache = {}

    # ------------------------------------------------------------------
    def _desvio(self, z, w):
        """log(z/z_Q) + Σ Log(1+u)/D (em P) - Σ Log(1+u)/D (em Q)"""
        soma = telescopar_mp(self.sys.factors, z, w, self.dps, True) - mpmath.log(z)
        return mpmath.log(z / self.z_q) + soma - self.soma_q

    def _passo_fd(self):
        return mpmath.mpf(10) ** (-max(6, self.dps // 4))

    def projetar(self, theta):
        """Ponto profundo (z, w_Q + ρθ) na folha de Q"""
        with mpmath.workdps(self.dps):
            w = self.w_q + self.rho * mpmath.mpc(theta)
            z = self.z_q
            tol = mpmath.mpf(10) ** (-(self.dps - 10))
            for _ in range(MAX_NEWTON):
                F = self._desvio(z, w)
                if abs(F) < tol:
                    return z, w
                h = abs(z) * self._passo_fd()
                derivada = (self._desvio(z + h, w) - self._desvio(z - h, w)) / (2 * h)
                if derivada == 0:
                    break
                z = z - F / derivada
        raise ProjectionDiverged(f"Newton não convergiu em {MAX_NEWTON} passos para θ = {theta}")

    def orbita(self, theta):
        """[f^0(P_θ), ..., f^n(P_θ)] com P_θ = φ_{s,n}(θ)"""
        chave = ('orbita', complex(theta))
        if chave not in self._cache:
            z, w = self.projetar(theta)
            niveis = [AffinePoint(z, w)]
            with mpmath.workdps(self.dps):
                for _ in range(self.n):
                    for fator in reversed(self.sys.factors):
                        z, w = fator.inverse(z, w)
                    niveis.append(AffinePoint(z, w))
            self._cache[chave] = niveis[::-1]
        return self._cache[chave]

    def ponto(self, theta):
        return self.orbita(theta)[0]

    def ponto_profundo(self, theta):
        return self.orbita(theta)[-1]

    def tangentes(self, theta):
        """Vetores (dz/dθ, dw/dθ) em cada nível 0..n.

        Diferença central ao longo de θ só no nível profundo; daí para baixo
        apenas produtos de jacobianas exatas.
        """
        chave = ('tangentes', complex(theta))
        if chave not in self._cache:
            niveis = self.orbita(theta)
            with mpmath.workdps(self.dps):
                delta = self._passo_fd()
                theta_mp = mpmath.mpc(theta)
                z_mais, _ = self.projetar(theta_mp + delta)
                z_menos, _ = self.projetar(theta_mp - delta)
                vetor = ((z_mais - z_menos) / (2 * delta), self.rho)
                tangentes = [vetor]
                for j in range(self.n, 0, -1):
                    vetor = mat_vec(jacobian_inverse(self.sys, niveis[j]), vetor)
                    tangentes.append(vetor)
            self._cache[chave] = tangentes[::-1]
        return self._cache[chave]

    def regioes(self, theta):
        return tuple(region_of(p, self.k) for p in self.orbita(theta))

    def log10_max_coordenada(self, theta):
        with mpmath.workdps(self.dps):
            return max(float(mpmath.log10(abs(c))) for c in self.ponto(theta).as_tuple() if c != 0)


def leaf_point(sys, k, L, theta, disco=None):
    if abs(theta) > 1 + 1e-12:
        raise ValueError(f"|θ| deve ser <= 1 (recebido {abs(theta):.6g})")
    disco = disco or DiscoFolha(sys, k, L)
    return disco.ponto(theta)


def theta_region_index(sys, k, L, theta, i, disco=None):
    """θ ∈ Θ_{n,i}: níveis i..n todos em V+"""
    disco = disco or DiscoFolha(sys, k, L)
    if not 0 <= i <= disco.n:
        raise ValueError(f"i deve estar em [0, {disco.n}]")
    return all(r == Regiao.VPLUS for r in disco.regioes(theta)[i:])


# ----------------------------------------------------------------------
# Grades de θ
# ----------------------------------------------------------------------
def theta_grid(n_borda=64, n_interior=32, raios=(0.2, 0.4, 0.6, 0.8)):
    """θ = 0, n_borda pontos no círculo unitário e n_interior em raios internos"""
    borda = [cmath.exp(2j * math.pi * j / n_borda) for j in range(n_borda)]
    por_raio = max(1, n_interior // len(raios))
    interior = [
        r * cmath.exp(2j * math.pi * (j + 0.5) / por_raio)
        for r in raios for j in range(por_raio)
    ]
    return [0j] + borda + interior


def grade_quadrada(m=32):
    valores = np.linspace(-1.0, 1.0, m)
    return [complex(x, y) for y in valores for x in valores if x * x + y * y <= 1.0]


# ----------------------------------------------------------------------
# Verticalidade e verificações da folha
# ----------------------------------------------------------------------
def verticality_slope(sys, k, L, thetas=None, limiar=None, disco=None):
    """sup |z'|/|w'| sobre amostras da folha em V+ com log|z| >= limiar"""
    disco = disco or DiscoFolha(sys, k, L)
    thetas = thetas if thetas is not None else theta_grid(16, 8)
    limiar = limiar if limiar is not None else max(math.log(1.0 / k.c_phi), math.log(k.R))
    inclinacao = 0.0
    amostras = 0
    with mpmath.workdps(disco.dps):
        for theta in thetas:
            for ponto, (dz, dw) in zip(disco.orbita(theta), disco.tangentes(theta)):
                if region_of(ponto, k) != Regiao.VPLUS or mpmath.log(abs(ponto.z)) < limiar:
                    continue
                amostras += 1
                inclinacao = max(inclinacao, float(abs(dz) / abs(dw)))
    if not amostras:
        logger.warning(f"Nenhuma amostra da folha acima do limiar {limiar:.4g}; inclinação 0")
    return inclinacao


def nesting_defect(sys, k, L, thetas=None):
    """Compara φ_{s,n}(θ) com φ_{s,n+1}(θ') onde θ' é lido no nível n+1.

    Devolve (max |θ'|, max distância relativa).
    """
    thetas = thetas if thetas is not None else theta_grid(16, 8)
    disco = DiscoFolha(sys, k, L)
    proximo = DiscoFolha(sys, k, L.with_depth(L.depth + 1))
    max_theta, max_defeito = 0.0, 0.0
    with mpmath.workdps(proximo.dps):
        for theta in thetas:
            z_prof, _ = disco.ponto_profundo(theta).as_tuple()
            # no nível n+1 a coordenada w é o z do nível n
            theta_linha = (z_prof - proximo.w_q) / proximo.rho
            max_theta = max(max_theta, float(abs(theta_linha)))
            if abs(theta_linha) > 1:
                continue
            p = disco.ponto(theta)
            q = proximo.ponto(theta_linha)
            escala = max(1, abs(p.z), abs(p.w))
            defeito = max(abs(p.z - q.z), abs(p.w - q.w)) / escala
            max_defeito = max(max_defeito, float(defeito))
    return max_theta, max_defeito


def disco_alta_precisao(sys, k, L, thetas):
    """Disco com precisão extra para reiterar para frente a partir do nível 0"""
    disco = DiscoFolha(sys, k, L)
    extra = max(disco.log10_max_coordenada(t) for t in thetas)
    return DiscoFolha(sys, k, L, dps_extra=math.ceil(max(0.0, extra)) + 10)


def leaf_confinement_defect(sys, k, L, thetas=None):
    """Desvio de x em f^n(disco), reiterando a partir dos pontos do nível 0.

    Devolve (desvio em log|x|, desvio de fase).
    """
    thetas = thetas if thetas is not None else theta_grid(16, 8)
    disco = disco_alta_precisao(sys, k, L, thetas)
    max_log, max_fase = 0.0, 0.0
    with mpmath.workdps(disco.dps):
        for theta in thetas:
            z, w = disco.ponto(theta).as_tuple()
            for _ in range(disco.n):
                for fator in sys.factors:
                    z, w = fator.forward(z, w)
            desvio = disco._desvio(z, w)
            max_log = max(max_log, float(abs(mpmath.re(desvio))))
            fase = math.remainder(float(mpmath.im(desvio)), 2 * math.pi)
            max_fase = max(max_fase, abs(fase))
    return max_log, max_fase


def level_defect(sys, k, L, thetas=None, params=None):
    """max |g+(φ(θ)) - c| sobre a grade"""
    thetas = thetas if thetas is not None else theta_grid(16, 8)
    params = (params or GreenParams()).for_constants(k)
    disco = disco_alta_precisao(sys, k, L, thetas)
    pior = 0.0
    for theta in thetas:
        g = green_plus_precise(sys, disco.ponto(theta), disco.dps, params)
        pior = max(pior, abs(float(g) - L.c))
    return pior


def _coordenadas_log(pontos):
    """(Re log z, Im log z, Re log w, Im log w) como floats"""
    linhas = []
    for p in pontos:
        linha = []
        for c in (p.z, p.w):
            lc = mpmath.log(c) if c != 0 else mpmath.mpc(-745, 0)
            linha.extend([float(mpmath.re(lc)), float(mpmath.im(lc))])
        linhas.append(linha)
    return np.array(linhas)


def injectivity_gap(sys, k, L, m=32, disco=None):
    """Menor separação (em coordenadas log) entre imagens de θ distintos da grade m×m"""
    disco = disco or DiscoFolha(sys, k, L)
    thetas = grade_quadrada(m)
    with mpmath.workdps(disco.dps):
        pontos = [disco.ponto(t) for t in thetas]
        coords = _coordenadas_log(pontos)
    distancias, _ = cKDTree(coords).query(coords, k=2)
    return float(distancias[:, 1].min())


def _projetivo_normalizado(z, w):
    coords = np.stack([z, w, np.ones_like(z)], axis=1)
    pivo = coords[np.arange(len(coords)), np.argmax(np.abs(coords), axis=1)]
    normal = coords / pivo[:, None]
    return np.concatenate([normal.real, normal.imag], axis=1)


def coverage_histogram(sys, k, L, thetas=None, n_nuvem=64, seed=0, bins=10, params=None):
    """Histograma das distâncias da nuvem em L_c aos pontos traçados da folha"""
    params = (params or GreenParams()).for_constants(k)
    thetas = thetas if thetas is not None else theta_grid(16, 8)
    disco = DiscoFolha(sys, k, L)
    with mpmath.workdps(disco.dps):
        folha = [disco.ponto(t) for t in thetas]
        fz = np.array([complex(p.z) for p in folha])
        fw = np.array([complex(p.w) for p in folha])

    rng = np.random.default_rng(seed)
    nuvem = []
    for _ in range(n_nuvem):
        direcao = rng.normal(size=4)
        raio = AffinePoint(complex(direcao[0], direcao[1]), complex(direcao[2], direcao[3]))
        try:
            nuvem.append(level_set_seed(sys, L.c, raio, params))
        except (HenonError, ValueError) as e:
            logger.debug(f"Raio {raio} descartado: {e}")
    if not nuvem:
        raise ValueError("nenhum ponto da nuvem encontrado em L_c")

    with np.errstate(all='ignore'):
        alvo = _projetivo_normalizado(fz, fw)
        alvo = alvo[np.all(np.isfinite(alvo), axis=1)]
        pontos = _projetivo_normalizado(np.array([p.z for p in nuvem]), np.array([p.w for p in nuvem]))
    distancias, _ = cKDTree(alvo).query(pontos)
    contagens, bordas = np.histogram(distancias, bins=bins)
    return {
        'bins': [float(b) for b in bordas],
        'counts': [int(c) for c in contagens],
        'mediana': float(np.median(distancias)),
        'nuvem': len(nuvem),
        'folha': int(len(alvo)),
    }
