"""
Funções de Green g+ e g- com refinamento telescópico.

Fluxo para cada ponto:
    1. itera (vetorizado em numpy) até entrar na zona de escape
       |z| >= raio e |w| <= |z| (ou o espelho para g-);
    2. a partir dali trabalha em escala logarítmica, somando
       log|1 + u_r| / D_r até o termo ficar desprezível.

Pontos que estouram a faixa de double antes da zona seguem em ExtComplex.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import mpmath
import numpy as np
from scipy.optimize import brentq

from .exceptions import BranchAmbiguity, NoBracket, NonConvergent
from .extcomplex import ExtComplex
from .henon import AffinePoint, passo_ext

logger = logging.getLogger(__name__)

U_DESPREZIVEL = 1e-17
MAX_TELESCOPAGEM_PLUS = 64
MAX_TELESCOPAGEM_MINUS = 200
LOG_LIMITE_SEMENTE = 690.0


class Status(str, Enum):
    ESCAPED = 'Escaped'
    BOUNDED = 'BoundedWithinBudget'


class Conjunto(str, Enum):
    K_PLUS = 'KPlus'
    U_PLUS = 'UPlus'
    K_MINUS = 'KMinus'
    U_MINUS = 'UMinus'


@dataclass(frozen=True)
class GreenParams:
    escape_radius: float = 1e8
    max_iter: int = 400
    tol: float = 1e-10

    def __post_init__(self):
        if not self.escape_radius > 1:
            raise ValueError("escape_radius deve ser > 1")
        if self.max_iter < 1:
            raise ValueError("max_iter deve ser >= 1")
        if not self.tol > 0:
            raise ValueError("tol deve ser > 0")

    def for_constants(self, k):
        """Garante escape_radius acima do R das constantes da filtração"""
        raio = max(self.escape_radius, 16.0 * k.R)
        return GreenParams(raio, self.max_iter, self.tol)


@dataclass(frozen=True)
class GreenValue:
    value: float
    iterations: int
    status: Status
    refined: bool = False

    @property
    def escaped(self):
        return self.status == Status.ESCAPED


@dataclass(frozen=True)
class Classificacao:
    plus: Conjunto
    minus: Conjunto
    budget_limited: bool = False


@dataclass
class _EstadoZona:
    """Pontos que entraram na zona de escape, em escala logarítmica"""

    log_z: np.ndarray
    fase_z: np.ndarray
    log_w: np.ndarray
    fase_w: np.ndarray
    indice: np.ndarray
    log_d: np.ndarray


# ----------------------------------------------------------------------
# Telescopagem vetorizada
# ----------------------------------------------------------------------
def _log_e_fase(valores):
    modulo = np.abs(valores)
    with np.errstate(divide='ignore'):
        return np.log(modulo), np.angle(valores)


def _telescopar(fatores, estado, tol, direction, limite):
    """Soma telescópica em escala log.

    Devolve (valor, soma_fase, passo_ruim, u_ruim) onde passo_ruim marca o
    primeiro passo com |u| >= 1/2 (-1 se nenhum).
    """
    log_z, fase_z = estado.log_z.copy(), estado.fase_z.copy()
    log_w, fase_w = estado.log_w.copy(), estado.fase_w.copy()
    indice, log_d = estado.indice.copy(), estado.log_d.copy()
    n = log_z.size
    # cauda de -log|a_i|/D_k: vale o maior |log a_i| entre os fatores
    maior_log_a = max(abs(math.log(abs(f.a))) for f in fatores)

    dominante_log = log_z if direction > 0 else log_w
    valor = dominante_log * np.exp(-log_d)
    soma_fase = np.zeros(n)
    passo_ruim = np.full(n, -1)
    u_ruim = np.zeros(n)
    u_morto = np.zeros(n, dtype=bool)
    pronto = np.zeros(n, dtype=bool)
    modulo_anterior = np.full(n, np.inf)

    with np.errstate(all='ignore'):
        for passo in range(limite):
            if pronto.all():
                break
            for i, fator in enumerate(fatores):
                mask = (indice == i) & ~pronto
                if not mask.any():
                    continue
                d = fator.degree
                log_a = math.log(abs(fator.a))
                lz, fz = log_z[mask], fase_z[mask]
                lw, fw = log_w[mask], fase_w[mask]
                # x domina; y é a outra coordenada
                lx, fx, ly, fy = (lz, fz, lw, fw) if direction > 0 else (lw, fw, lz, fz)
                vivo = ~u_morto[mask]

                u = np.zeros(lx.size, dtype=complex)
                for j, c in enumerate(fator.coeffs[:-1]):
                    if c != 0:
                        u += c * np.exp((j - d) * lx + 1j * (j - d) * fx)
                coef = fator.a if direction > 0 else 1.0
                u -= coef * np.exp(ly - d * lx + 1j * (fy - d * fx))
                u = np.where(vivo, u, 0)
                modulo_u = np.abs(u)

                um_mais_u = 1.0 + u
                log_1u = 0.5 * np.log1p(2.0 * u.real + modulo_u ** 2)
                fase_1u = np.angle(um_mais_u)

                novo_log_d = log_d[mask] + math.log(d)
                peso = np.exp(-novo_log_d)
                termo = log_1u * peso if direction > 0 else (log_1u - log_a) * peso

                ruim = (modulo_u >= 0.5) & (passo_ruim[mask] < 0)
                if ruim.any():
                    idx = np.flatnonzero(mask)[ruim]
                    passo_ruim[idx] = passo
                    u_ruim[idx] = modulo_u[ruim]

                if np.any(um_mais_u[vivo] == 0) or np.any(~np.isfinite(termo)):
                    raise NonConvergent("termo de correção infinito (1 + u = 0)")

                valor[mask] += termo
                soma_fase[mask] += fase_1u * peso

                # coordenadas só andam enquanto u ainda conta
                novo_lx = np.where(vivo, d * lx + log_1u - (0 if direction > 0 else log_a), lx)
                novo_fx = np.where(vivo, d * fx + fase_1u + (0 if direction > 0 else -cmath.phase(fator.a)), fx)
                if direction > 0:
                    log_w[mask], fase_w[mask] = np.where(vivo, lx, lw), np.where(vivo, fx, fw)
                    log_z[mask], fase_z[mask] = novo_lx, np.remainder(novo_fx, 2 * math.pi)
                else:
                    log_z[mask], fase_z[mask] = np.where(vivo, lx, lz), np.where(vivo, fx, fz)
                    log_w[mask], fase_w[mask] = novo_lx, np.remainder(novo_fx, 2 * math.pi)
                log_d[mask] = novo_log_d

                agora_morto = u_morto[mask] | (modulo_u < U_DESPREZIVEL)
                u_morto[mask] = agora_morto
                if direction > 0:
                    terminou = agora_morto
                else:
                    terminou = agora_morto & (maior_log_a * peso < tol * 1e-3)
                pronto[mask] = terminou

                # depois de alguns passos o |u| tem de cair
                if passo >= 4:
                    subiu = vivo & (modulo_u > modulo_anterior[mask]) & (modulo_u > 1e-3)
                    if subiu.any():
                        raise NonConvergent(
                            f"correções telescópicas não decaem (|u| = {modulo_u[subiu].max():.3g})"
                        )
                modulo_anterior[mask] = np.where(vivo, modulo_u, modulo_anterior[mask])
                indice[mask] = (i + 1) % len(fatores)

    if not pronto.all():
        raise NonConvergent(f"telescopagem não convergiu em {limite} passos")
    return valor, soma_fase, passo_ruim, u_ruim


# ----------------------------------------------------------------------
# Escape
# ----------------------------------------------------------------------
def _fatores(sys, direction):
    return sys.factors if direction > 0 else tuple(reversed(sys.factors))


def _na_zona_ext(zx, wx, log_raio, direction):
    x, y = (zx, wx) if direction > 0 else (wx, zx)
    return x.log_mag >= log_raio and y.log_mag <= x.log_mag


def _escapar_ext(fatores, zx, wx, passo0, log_d0, total, log_raio, direction):
    """Continua a iteração de um único ponto em ExtComplex"""
    log_d = log_d0
    for passo in range(passo0, total + 1):
        i = passo % len(fatores)
        if _na_zona_ext(zx, wx, log_raio, direction):
            return zx, wx, i, passo, log_d
        if passo == total:
            break
        zx, wx = passo_ext(fatores[i], zx, wx, direction)
        log_d += math.log(fatores[i].degree)
    return None




def _zona_em_log(fatores, z, w, params, direction, iniciais_ext=None):
    """Itera o lote até a zona de escape; devolve o estado em escala log.

    `iniciais_ext` mapeia índice do lote -> par ExtComplex para pontos que
    já começam fora da faixa de double.
    """
    N = len(fatores)
    n = z.size
    raio = params.escape_radius
    total = params.max_iter * N
    iniciais_ext = iniciais_ext or {}

    ativo = np.ones(n, dtype=bool)
    na_zona = np.zeros(n, dtype=bool)
    iteracoes = np.full(n, total, dtype=int)
    zona_z = np.zeros(n, dtype=complex)
    zona_w = np.zeros(n, dtype=complex)
    zona_i = np.zeros(n, dtype=int)
    zona_log_d = np.zeros(n)
    pendentes = [(k, zx, wx, 0, 0.0) for k, (zx, wx) in iniciais_ext.items()]
    if pendentes:
        ativo[list(iniciais_ext)] = False
    log_d = 0.0

    with np.errstate(all='ignore'):
        for passo in range(total + 1):
            i = passo % N
            az, aw = np.abs(z), np.abs(w)
            if direction > 0:
                entrou = ativo & (az >= raio) & (aw <= az)
            else:
                entrou = ativo & (aw >= raio) & (az <= aw)
            if entrou.any():
                zona_z[entrou], zona_w[entrou] = z[entrou], w[entrou]
                zona_i[entrou] = i
                zona_log_d[entrou] = log_d
                iteracoes[entrou] = passo
                na_zona |= entrou
                ativo &= ~entrou
            if passo == total or not ativo.any():
                break

            fator = fatores[i]
            za, wa = z[ativo], w[ativo]
            if direction > 0:
                novo_z, novo_w = fator.p(za) - fator.a * wa, za
            else:
                novo_z, novo_w = wa, (fator.p(wa) - za) / fator.a
            ruim = ~(np.isfinite(novo_z) & np.isfinite(novo_w))
            if ruim.any():
                idx = np.flatnonzero(ativo)[ruim]
                for k, zk, wk in zip(idx, za[ruim], wa[ruim]):
                    pendentes.append((int(k), ExtComplex.from_complex(zk),
                                      ExtComplex.from_complex(wk), passo, log_d))
                ativo[idx] = False
                novo_z, novo_w = novo_z[~ruim], novo_w[~ruim]
            z[ativo], w[ativo] = novo_z, novo_w
            log_d += math.log(fator.degree)

    lz, fz = _log_e_fase(zona_z)
    lw, fw = _log_e_fase(zona_w)
    log_raio = math.log(raio)
    for k, zx, wx, passo, ld in pendentes:
        logger.debug(f"Ponto {k} fora da faixa de double no passo {passo}; seguindo em ExtComplex")
        res = _escapar_ext(fatores, zx, wx, passo, ld, total, log_raio, direction)
        if res is None:
            continue
        zx, wx, i, p_esc, ld_esc = res
        na_zona[k] = True
        iteracoes[k] = p_esc
        zona_i[k] = i
        zona_log_d[k] = ld_esc
        lz[k], fz[k] = zx.log_mag, zx.phase
        lw[k], fw[k] = wx.log_mag, wx.phase

    estado = _EstadoZona(lz[na_zona], fz[na_zona], lw[na_zona], fw[na_zona],
                         zona_i[na_zona], zona_log_d[na_zona])
    return estado, na_zona, iteracoes


def green_many(sys, z, w, params=None, direction=1):
    """g+ (direction=1) ou g- (direction=-1) num lote de pontos.

    Retorna (valores, iteracoes, escapou) como arrays numpy.
    """
    params = params or GreenParams()
    fatores = _fatores(sys, direction)
    z = np.array(z, dtype=complex).ravel()
    w = np.array(w, dtype=complex).ravel()
    estado, na_zona, iteracoes = _zona_em_log(fatores, z, w, params, direction)

    valores = np.zeros(z.size)
    if na_zona.any():
        limite = MAX_TELESCOPAGEM_PLUS if direction > 0 else MAX_TELESCOPAGEM_MINUS
        valor, _, _, _ = _telescopar(fatores, estado, params.tol, direction, limite)
        valores[na_zona] = np.maximum(valor, 0.0)
    return valores, iteracoes, na_zona


def _green_escalar(sys, p, params, direction):
    params = params or GreenParams()
    fatores = _fatores(sys, direction)
    zx, wx = ExtComplex.from_mpc(p.z), ExtComplex.from_mpc(p.w)
    if zx.representable and wx.representable:
        z = np.array([complex(p.z)])
        w = np.array([complex(p.w)])
        iniciais = None
    else:
        z = np.zeros(1, dtype=complex)
        w = np.zeros(1, dtype=complex)
        iniciais = {0: (zx, wx)}
    estado, na_zona, iteracoes = _zona_em_log(fatores, z, w, params, direction, iniciais)
    if not na_zona[0]:
        return GreenValue(0.0, int(iteracoes[0]), Status.BOUNDED, False)
    limite = MAX_TELESCOPAGEM_PLUS if direction > 0 else MAX_TELESCOPAGEM_MINUS
    valor, _, _, _ = _telescopar(fatores, estado, params.tol, direction, limite)
    return GreenValue(max(float(valor[0]), 0.0), int(iteracoes[0]), Status.ESCAPED, True)


def green_plus(sys, p, params=None):
    return _green_escalar(sys, p, params, 1)


def green_minus(sys, p, params=None):
    return _green_escalar(sys, p, params, -1)


def classify(sys, p, params=None):
    gp = green_plus(sys, p, params)
    gm = green_minus(sys, p, params)
    return Classificacao(
        plus=Conjunto.U_PLUS if gp.escaped else Conjunto.K_PLUS,
        minus=Conjunto.U_MINUS if gm.escaped else Conjunto.K_MINUS,
        budget_limited=not (gp.escaped and gm.escaped),
    )


# ----------------------------------------------------------------------
# Coordenada de Böttcher
# ----------------------------------------------------------------------
def bottcher_x(sys, p, params=None):
    """Primeira coordenada normal x(P), com log|x| = -g+(P).

    Telescopa a partir do próprio P; cada fator (1 + u) precisa de |u| < 1/2
    para o ramo principal ser o certo.
    """
    params = params or GreenParams()
    zx, wx = ExtComplex.from_mpc(p.z), ExtComplex.from_mpc(p.w)
    if zx.is_zero:
        raise BranchAmbiguity(0, math.inf)
    estado = _EstadoZona(
        np.array([zx.log_mag]), np.array([zx.phase]),
        np.array([wx.log_mag]), np.array([wx.phase]),
        np.zeros(1, dtype=int), np.zeros(1),
    )
    valor, soma_fase, passo_ruim, u_ruim = _telescopar(
        sys.factors, estado, params.tol, 1, MAX_TELESCOPAGEM_PLUS
    )
    if passo_ruim[0] >= 0:
        raise BranchAmbiguity(int(passo_ruim[0]), float(u_ruim[0]))
    return ExtComplex(-float(valor[0]), -(zx.phase + float(soma_fase[0])))


# ----------------------------------------------------------------------
# Versões em mpmath
# ----------------------------------------------------------------------
def telescopar_mp(fatores, z, w, dps, checar_ramo):
    """log z + Σ Log(1 + u_r)/D_r em mpmath, ciclando `fatores` a partir do primeiro"""
    tol = mpmath.mpf(10) ** (-dps)
    log_x = mpmath.log(z)
    D = 1
    passo = 0
    while True:
        for fator in fatores:
            d = fator.degree
            u = -fator.a * w / z ** d
            for j, c in enumerate(fator.coeffs[:-1]):
                if c != 0:
                    u += c * z ** (j - d)
            modulo_u = abs(u)
            if checar_ramo and modulo_u >= 0.5:
                raise BranchAmbiguity(passo, float(modulo_u))
            D *= d
            log_x += mpmath.log(1 + u) / D
            z, w = z ** d * (1 + u), z
            passo += 1
            if modulo_u < tol:
                return log_x
            if passo > 4 * dps + MAX_TELESCOPAGEM_PLUS:
                raise NonConvergent(f"telescopagem em mp não convergiu ({passo} passos)")


def green_plus_precise(sys, p, dps=50, params=None):
    """g+ em mpmath; p pode ter coordenadas mpc de módulo arbitrário"""
    params = params or GreenParams()
    fatores = sys.factors
    with mpmath.workdps(dps):
        z, w = mpmath.mpc(p.z), mpmath.mpc(p.w)
        raio = mpmath.mpf(params.escape_radius)
        D = 1
        for _ in range(params.max_iter):
            for i, fator in enumerate(fatores):
                if abs(z) >= raio and abs(w) <= abs(z):
                    ciclo = fatores[i:] + fatores[:i]
                    return mpmath.re(telescopar_mp(ciclo, z, w, dps, False)) / D
                z, w = fator.forward(z, w)
                D *= fator.degree
        return mpmath.mpf(0)


def bottcher_x_precise(sys, p, dps=50):
    """x(P) em mpmath, telescopando a partir do próprio P"""
    with mpmath.workdps(dps):
        z, w = mpmath.mpc(p.z), mpmath.mpc(p.w)
        if z == 0:
            raise BranchAmbiguity(0, math.inf)
        return mpmath.exp(-telescopar_mp(sys.factors, z, w, dps, True))


# ----------------------------------------------------------------------
# Semente de nível
# ----------------------------------------------------------------------
def level_set_seed(sys, c, ray, params=None):
    """Ponto P = ρ·ray com g+(P) = c, por varredura em log ρ e brentq."""
    if not c > 0:
        raise ValueError("c deve ser > 0")
    params = params or GreenParams()
    if ray.z == 0 and ray.w == 0:
        raise NoBracket("direção nula")

    def excesso(s):
        ponto = AffinePoint(complex(ray.z) * math.exp(s), complex(ray.w) * math.exp(s))
        return green_plus(sys, ponto, params).value - c

    s = 0.0
    f_s = excesso(s)
    passo = 1.0 if f_s < 0 else -1.0
    anterior = s
    while True:
        anterior, s = s, s + passo
        if abs(s) > LOG_LIMITE_SEMENTE:
            raise NoBracket(f"o raio não cruza o nível {c} com |log ρ| <= {LOG_LIMITE_SEMENTE}")
        f_novo = excesso(s)
        if (f_novo >= 0) != (f_s >= 0):
            break
        f_s = f_novo
    baixo, alto = sorted((anterior, s))
    amostras = [excesso(v) for v in np.linspace(baixo, alto, 5)]
    if any(b < a for a, b in zip(amostras, amostras[1:])):
        raise NoBracket("g+ não é crescente ao longo do raio neste trecho")

    s_raiz = brentq(excesso, baixo, alto, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    semente = AffinePoint(complex(ray.z) * math.exp(s_raiz), complex(ray.w) * math.exp(s_raiz))
    erro = abs(excesso(s_raiz))
    if erro > 1e-8 * max(1.0, c):
        raise NonConvergent(f"semente com |g+ - c| = {erro:.3g}")
    logger.info(f"Semente do nível c={c:.6g}: |z|={abs(semente.z):.6g}, |w|={abs(semente.w):.6g}")
    return semente


# ----------------------------------------------------------------------
# Grade
# ----------------------------------------------------------------------
EIXOS = ('re_z', 'im_z', 're_w', 'im_w')


@dataclass(frozen=True)
class Fatia:
    """Plano real de C²: dois eixos variam, os outros dois ficam fixos"""

    eixo_x: str = 're_z'
    eixo_y: str = 'im_z'
    fixos: tuple = (('re_w', 0.0), ('im_w', 0.0))

    def __post_init__(self):
        usados = {self.eixo_x, self.eixo_y} | {nome for nome, _ in self.fixos}
        if usados != set(EIXOS) or self.eixo_x == self.eixo_y:
            raise ValueError(f"fatia inválida: {self.eixo_x}, {self.eixo_y}, {self.fixos}")

    @classmethod
    def parse(cls, texto):
        """'re_z,im_z' ou 're_z,re_w:im_z=0.1,im_w=0'"""
        partes = texto.split(':')
        eixos = [e.strip() for e in partes[0].split(',')]
        if len(eixos) != 2:
            raise ValueError(f"fatia deve ter dois eixos: {texto}")
        valores = {}
        if len(partes) > 1 and partes[1].strip():
            for item in partes[1].split(','):
                nome, valor = item.split('=')
                valores[nome.strip()] = float(valor)
        fixos = tuple((e, valores.get(e, 0.0)) for e in EIXOS if e not in eixos)
        return cls(eixos[0], eixos[1], fixos)

    def pontos(self, x, y):
        coords = dict(self.fixos)
        coords[self.eixo_x] = x
        coords[self.eixo_y] = y
        return coords['re_z'] + 1j * coords['im_z'], coords['re_w'] + 1j * coords['im_w']


def _linha(sys, fatia, xs, y, params):
    z, w = fatia.pontos(xs, np.full_like(xs, y))
    valores, iteracoes, escapou = green_many(sys, np.broadcast_to(z, xs.shape), np.broadcast_to(w, xs.shape), params)
    return [
        GreenValue(float(v), int(it), Status.ESCAPED if e else Status.BOUNDED, bool(e))
        for v, it, e in zip(valores, iteracoes, escapou)
    ]


def render_grid(sys, window, resolution, fatia=None, params=None, threads=1):
    """Grade nx × ny de GreenValue (linha j = y_index), determinística."""
    xmin, xmax, ymin, ymax = window
    nx, ny = resolution
    if nx < 1 or ny < 1:
        raise ValueError("resolução deve ser >= 1 em cada eixo")
    fatia = fatia or Fatia()
    params = params or GreenParams()
    xs = np.linspace(xmin, xmax, nx) if nx > 1 else np.array([float(xmin)])
    ys = np.linspace(ymin, ymax, ny) if ny > 1 else np.array([float(ymin)])

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        linhas = list(executor.map(lambda y: _linha(sys, fatia, xs, y, params), ys))
    logger.info(f"Grade {nx}x{ny} calculada com {threads} thread(s)")
    return linhas
