"""
Métrica de Fubini-Study ao longo dos discos analíticos das folhas.

Normas FS são avaliadas em mpmath e guardadas também em log, porque
‖φ_{s,n}‖ cresce como exp(c·d^n) e passa da faixa de double rapidamente.
"""

import logging
import math
from dataclasses import dataclass, field

import mpmath

from .exceptions import BoundViolation
from .filtracao import Modo, Regiao
from .forma_normal import DiscoFolha, DiscSample, theta_grid, verticality_slope
from .henon import Tangent

logger = logging.getLogger(__name__)

TOL_SANDUICHE = 1e-9
LIMITE_DOUBLE = 1e100


# ----------------------------------------------------------------------
# Norma FS
# ----------------------------------------------------------------------
def _fs_quadrado(z, w, dz, dw):
    numerador = abs(dz) ** 2 + abs(dw) ** 2 + abs(z * dw - dz * w) ** 2
    denominador = (1 + abs(z) ** 2 + abs(w) ** 2) ** 2
    return numerador / denominador


def _cabe_em_double(*valores):
    return all(isinstance(v, complex) and abs(v) < LIMITE_DOUBLE for v in valores)


def fs_norm(t):
    z, w = t.base.z, t.base.w
    if _cabe_em_double(complex(z) if isinstance(z, (int, float)) else z, complex(w) if isinstance(w, (int, float)) else w,
                       complex(t.dz), complex(t.dw)):
        return math.sqrt(_fs_quadrado(complex(z), complex(w), complex(t.dz), complex(t.dw)))
    return float(mpmath.sqrt(_fs_quadrado(mpmath.mpc(z), mpmath.mpc(w), mpmath.mpc(t.dz), mpmath.mpc(t.dw))))


def log_fs_norm(t):
    quadrado = _fs_quadrado(mpmath.mpc(t.base.z), mpmath.mpc(t.base.w), mpmath.mpc(t.dz), mpmath.mpc(t.dw))
    if quadrado == 0:
        return -math.inf
    return float(mpmath.log(quadrado) / 2)


# ----------------------------------------------------------------------
# Perfis ao longo do disco
# ----------------------------------------------------------------------
def _log_fs2_niveis(disco, theta):
    """log ‖f^j ∘ φ‖²_FS em cada nível j = 0..n"""
    with mpmath.workdps(disco.dps):
        logs = []
        for ponto, (dz, dw) in zip(disco.orbita(theta), disco.tangentes(theta)):
            quadrado = _fs_quadrado(ponto.z, ponto.w, dz, dw)
            logs.append(float(mpmath.log(quadrado)) if quadrado != 0 else -math.inf)
        return logs


def disc_fs_profile(sys, k, L, thetas=None, disco=None):
    disco = disco or DiscoFolha(sys, k, L)
    thetas = thetas if thetas is not None else theta_grid()
    amostras = []
    with mpmath.workdps(disco.dps):
        for theta in thetas:
            ponto = disco.ponto(theta)
            dz, dw = disco.tangentes(theta)[0]
            tangente = Tangent(ponto, dz, dw)
            log_norma = log_fs_norm(tangente)
            norma = math.exp(log_norma) if log_norma < 709 else math.inf
            amostras.append(DiscSample(complex(theta), ponto, norma, log_norma, disco.regioes(theta)))
    return amostras


def chain_rule_defect(sys, k, L, thetas=None, h=None, disco=None):
    """Erro relativo máximo entre a tangente por jacobianas e a diferença
    central da composição inteira θ -> φ_{s,n}(θ).

    Sem h o passo é 10^-(dps/3).
    """
    disco = disco or DiscoFolha(sys, k, L)
    thetas = thetas if thetas is not None else theta_grid(16, 8)
    pior = 0.0
    with mpmath.workdps(disco.dps):
        passo = mpmath.mpf(h) if h is not None else mpmath.mpf(10) ** (-(disco.dps // 3))
        for theta in thetas:
            theta_mp = mpmath.mpc(theta)
            if abs(theta_mp) + passo > 1:
                continue
            mais = disco.ponto(theta_mp + passo)
            menos = disco.ponto(theta_mp - passo)
            fd = ((mais.z - menos.z) / (2 * passo), (mais.w - menos.w) / (2 * passo))
            exato = disco.tangentes(theta)[0]
            escala = max(abs(exato[0]), abs(exato[1]))
            erro = max(abs(fd[0] - exato[0]), abs(fd[1] - exato[1])) / escala
            pior = max(pior, float(erro))
    return pior


# ----------------------------------------------------------------------
# Limitantes por caso
# ----------------------------------------------------------------------
def log_limitante_caso_i(sys, k, c, i):
    """log do limitante inferior de ‖f^{i-1}∘φ‖²/‖f^i∘φ‖² com θ ∈ Θ_{n,i-1}"""
    d, modulo_a = sys.d, abs(sys.a)
    constante = d ** 2 / (96 * (1 + k.c_g ** 2) * 2 ** (2 * d - 2) * modulo_a ** 2)
    return math.log(constante) + c * (4 - 4 / d) * d ** i


def log_limitante_caso_iii(sys, k):
    """log do limitante superior da mesma razão para θ fora de Θ_{n,i}"""
    d, modulo_a = sys.d, abs(sys.a)
    return (math.log(2 ** 4 * 9 * 41 * d ** 2 * modulo_a ** 2)
            + 2 * d * math.log(k.c_vplus) - (2 * d - 4) * math.log(k.R))


def _subcaso_ii(sys, k, c, i, modulo_w_log):
    """Faixa de |w| no nível i para amostras que cruzam de V- para V+"""
    if modulo_w_log < math.log(k.R):
        return 'w<R'
    teto = math.log(8) / sys.d + c * sys.d ** (i - 1)
    if modulo_w_log < teto:
        return 'R<=w<8^(1/d)|s|^(-d^(i-1))'
    return 'w>=8^(1/d)|s|^(-d^(i-1))'


@dataclass
class RelatorioCasos:
    n: int
    i: int
    linhas: list = field(default_factory=list)
    assertivo: bool = False
    inf_caso_i: float = None
    C_s_hat: float = None
    C_s_hat_por_subcaso: dict = field(default_factory=dict)
    C_sVplus_hat: float = None
    caso_i_acima_de_1: bool = True
    falhas_sanduiche: int = 0
    amostras_sanduiche: int = 0

    def as_dict(self):
        return {
            'n': self.n,
            'i': self.i,
            'assertivo': self.assertivo,
            'inf_caso_i': self.inf_caso_i,
            'C_s_hat': self.C_s_hat,
            'C_s_hat_por_subcaso': self.C_s_hat_por_subcaso,
            'C_sVplus_hat': self.C_sVplus_hat,
            'caso_i_acima_de_1': self.caso_i_acima_de_1,
            'falhas_sanduiche': self.falhas_sanduiche,
            'amostras_sanduiche': self.amostras_sanduiche,
            'casos': {caso: sum(1 for l in self.linhas if l['case'] == caso) for caso in ('i', 'ii', 'iii')},
        }


def _exp_seguro(x):
    if x is None:
        return None
    return math.exp(x) if x < 709 else math.inf


def _sanduiche(ponto, tangente, c_g):
    """Limitantes do lema de verticalidade para ‖·‖²_FS num ponto de V+"""
    z, w = ponto.z, ponto.w
    _, dw = tangente
    base = 1 + abs(z) ** 2 + abs(w) ** 2
    inferior = abs(dw) ** 2 / (4 * base)
    superior = 2 * (1 + c_g ** 2) * abs(dw) ** 2 / base
    return inferior, superior


def case_bound_check(sys, k, L, i, n=None, thetas=None, disco=None):
    """Classifica cada θ nos casos i/ii/iii para o passo f^-1 do nível i ao i-1
    e confronta a razão ‖f^{i-1}∘φ‖²/‖f^i∘φ‖² com os limitantes fechados.

    Os limitantes só são afirmados com constantes PaperFaithful num sistema
    de um fator; caso contrário a tabela é informativa.
    """
    if n is not None and n != L.depth:
        L = L.with_depth(n)
    disco = disco or DiscoFolha(sys, k, L)
    n = disco.n
    if not 1 <= i <= n:
        raise ValueError(f"i deve estar em [1, {n}]")
    thetas = thetas if thetas is not None else theta_grid()
    assertivo = k.mode == Modo.PAPER_FAITHFUL and sys.N == 1
    relatorio = RelatorioCasos(n=n, i=i, assertivo=assertivo)
    log_b3 = log_limitante_caso_i(sys, k, L.c, i)
    log_b4 = log_limitante_caso_iii(sys, k)

    razoes = {'i': [], 'ii': []}
    por_subcaso = {}
    log_fs_vplus = []
    with mpmath.workdps(disco.dps):
        for theta in thetas:
            regioes = disco.regioes(theta)
            em_i = all(r == Regiao.VPLUS for r in regioes[i:])
            em_i_menos_1 = em_i and regioes[i - 1] == Regiao.VPLUS
            logs = _log_fs2_niveis(disco, theta)
            log_razao = logs[i - 1] - logs[i]
            linha = {'n': n, 'i': i, 'theta': complex(theta), 'ratio': _exp_seguro(log_razao),
                     'log_ratio': log_razao, 'bound': None, 'pass': None, 'subcase': ''}

            if em_i_menos_1:
                linha['case'] = 'i'
                razoes['i'].append(log_razao)
                if log_razao <= 0:
                    relatorio.caso_i_acima_de_1 = False
                if assertivo:
                    linha['bound'] = _exp_seguro(log_b3)
                    linha['pass'] = log_razao >= log_b3
            elif em_i:
                linha['case'] = 'ii'
                ponto_i = disco.orbita(theta)[i]
                subcaso = _subcaso_ii(sys, k, L.c, i, float(mpmath.log(abs(ponto_i.w))) if ponto_i.w != 0 else -math.inf)
                linha['subcase'] = subcaso
                razoes['ii'].append(log_razao)
                por_subcaso.setdefault(subcaso, []).append(log_razao)
            else:
                linha['case'] = 'iii'
                if assertivo:
                    linha['bound'] = _exp_seguro(log_b4)
                    linha['pass'] = log_razao <= log_b4

            if em_i:
                ponto_i = disco.orbita(theta)[i]
                tangente_i = disco.tangentes(theta)[i]
                inferior, superior = _sanduiche(ponto_i, tangente_i, k.c_g)
                valor = _fs_quadrado(ponto_i.z, ponto_i.w, *tangente_i)
                relatorio.amostras_sanduiche += 1
                if not (inferior * (1 - TOL_SANDUICHE) <= valor <= superior * (1 + TOL_SANDUICHE)):
                    relatorio.falhas_sanduiche += 1
                    if assertivo:
                        raise BoundViolation(complex(theta), i, n, float(valor), float(superior), 'sanduíche FS em V+')
                log_fs_vplus.append(logs[i])

            if assertivo and linha['pass'] is False:
                limitante = log_b3 if linha['case'] == 'i' else log_b4
                raise BoundViolation(complex(theta), i, n, log_razao, limitante,
                                     f"caso {linha['case']} (log da razão)")
            relatorio.linhas.append(linha)

    if razoes['i']:
        inf_i = min(razoes['i'])
        relatorio.inf_caso_i = _exp_seguro(inf_i)
        if razoes['ii']:
            relatorio.C_s_hat = _exp_seguro(max(razoes['ii']) - inf_i)
            relatorio.C_s_hat_por_subcaso = {
                nome: _exp_seguro(max(valores) - inf_i) for nome, valores in sorted(por_subcaso.items())
            }
    if log_fs_vplus:
        relatorio.C_sVplus_hat = _exp_seguro(max(log_fs_vplus) - min(log_fs_vplus))
    logger.info(
        f"Casos (n={n}, i={i}): {len(razoes['i'])} i, {len(razoes['ii'])} ii, "
        f"{len(relatorio.linhas) - len(razoes['i']) - len(razoes['ii'])} iii"
    )
    return relatorio


# ----------------------------------------------------------------------
# Sequência de Brody
# ----------------------------------------------------------------------
@dataclass
class BrodyReport:
    n_values: list = field(default_factory=list)
    base_norms: list = field(default_factory=list)
    log_base_norms: list = field(default_factory=list)
    sup_norms: list = field(default_factory=list)
    log_sup_norms: list = field(default_factory=list)
    ratios: list = field(default_factory=list)
    k_n_zero: list = field(default_factory=list)
    k_n_sup: list = field(default_factory=list)
    case_bound_checks: list = field(default_factory=list)
    M_s_hat: float = None
    C_s_hat: float = None
    C_sVplus_hat: float = None
    c_g: float = None
    mode: str = Modo.RELAXED.value

    @property
    def base_norms_crescentes(self):
        return all(b > a for a, b in zip(self.log_base_norms, self.log_base_norms[1:]))

    def as_dict(self):
        return {
            'n_values': self.n_values,
            'base_norms': self.base_norms,
            'log_base_norms': self.log_base_norms,
            'sup_norms': self.sup_norms,
            'log_sup_norms': self.log_sup_norms,
            'ratios': self.ratios,
            'k_n_zero': self.k_n_zero,
            'k_n_sup': self.k_n_sup,
            'case_bound_checks': [r.as_dict() for r in self.case_bound_checks],
            'M_s_hat': self.M_s_hat,
            'C_s_hat': self.C_s_hat,
            'C_sVplus_hat': self.C_sVplus_hat,
            'c_g': self.c_g,
            'mode': self.mode,
        }


def medir_c_g(sys, k, L, n_values, thetas=None):
    """Inclinação vertical máxima sobre as amostras em V+ de todos os discos"""
    thetas = thetas if thetas is not None else theta_grid(16, 8)
    limiar = math.log(k.R)
    return max(
        verticality_slope(sys, k, L.with_depth(n), thetas, limiar)
        for n in n_values
    )


def _k_n_na_origem(disco, log_base):
    """‖k_n‖_FS em 0 com a tangente de φ_{s,n} dividida por R_n"""
    with mpmath.workdps(disco.dps):
        R = mpmath.exp(mpmath.mpf(log_base))
        dz, dw = disco.tangentes(0j)[0]
        return math.exp(log_fs_norm(Tangent(disco.ponto(0j), dz / R, dw / R)))


def brody_ratio_sequence(sys, k, L, n_range, thetas=None, medir_constante=True, checar_casos=True):
    """Razões sup/base de ‖φ_{s,n}‖_FS para n em n_range, com os casos de cada (i, n).

    k_n(θ) = φ_{s,n}(θ/R_n), R_n = ‖φ_{s,n}‖_{FS,0}, avaliado em |θ| <= R_n/2.
    """
    n_values = list(n_range)
    if not n_values:
        raise ValueError("n_range vazio")
    thetas = list(thetas) if thetas is not None else theta_grid()
    if 0j not in thetas:
        thetas = [0j] + thetas
    if medir_constante:
        k = k.with_c_g(medir_c_g(sys, k, L, n_values))
        logger.info(f"c_g medido: {k.c_g:.6g}")

    relatorio = BrodyReport(c_g=k.c_g, mode=k.mode.value)
    casos = []
    for n in n_values:
        disco = DiscoFolha(sys, k, L.with_depth(n))
        amostras = disc_fs_profile(sys, k, L, thetas, disco)
        log_base = next(a.log_fs_norm for a in amostras if a.theta == 0)
        log_sup = max(a.log_fs_norm for a in amostras)
        meio_disco = [a.log_fs_norm - log_base for a in amostras if abs(a.theta) <= 0.5]

        relatorio.n_values.append(n)
        relatorio.log_base_norms.append(log_base)
        relatorio.base_norms.append(_exp_seguro(log_base))
        relatorio.log_sup_norms.append(log_sup)
        relatorio.sup_norms.append(_exp_seguro(log_sup))
        relatorio.ratios.append(math.exp(log_sup - log_base))
        relatorio.k_n_zero.append(_k_n_na_origem(disco, log_base))
        relatorio.k_n_sup.append(math.exp(max(meio_disco)))

        if checar_casos:
            for i in range(1, n + 1):
                casos.append(case_bound_check(sys, k, L.with_depth(n), i, thetas=thetas, disco=disco))
        logger.info(f"Brody n={n}: log base = {log_base:.6g}, razão = {relatorio.ratios[-1]:.6g}")

    relatorio.case_bound_checks = casos
    relatorio.M_s_hat = max(relatorio.ratios)
    valores_cs = [r.C_s_hat for r in casos if r.C_s_hat is not None]
    valores_cv = [r.C_sVplus_hat for r in casos if r.C_sVplus_hat is not None]
    relatorio.C_s_hat = max(valores_cs) if valores_cs else None
    relatorio.C_sVplus_hat = max(valores_cv) if valores_cv else None
    return relatorio


# ----------------------------------------------------------------------
# Curvas inteiras de calibração
# ----------------------------------------------------------------------
def curva_polinomial(fator):
    """θ -> (θ, p(θ)): algébrica, derivada FS limitada"""
    def curva(t):
        return t, fator.p(t), 1, fator.dp(t)
    return curva


def curva_exp_potencia(n=3):
    """θ -> (θ, exp(θ^n))"""
    def curva(t):
        e = mpmath.exp(t ** n)
        return t, e, 1, n * t ** (n - 1) * e
    return curva


def curva_exp_quadratica():
    """θ -> (exp(θ), exp(iθ²))"""
    def curva(t):
        e1 = mpmath.exp(t)
        e2 = mpmath.exp(1j * t ** 2)
        return e1, e2, e1, 2j * t * e2
    return curva


def curve_fs_profile(curva, raios, n_angulos=64, dps=50):
    """sup da norma FS sobre |θ| = r para cada raio (em log)"""
    perfil = []
    with mpmath.workdps(dps):
        for r in raios:
            melhor = -math.inf
            for j in range(n_angulos):
                t = mpmath.mpf(r) * mpmath.expjpi(mpmath.mpf(2 * j) / n_angulos)
                z, w, dz, dw = curva(t)
                quadrado = _fs_quadrado(mpmath.mpc(z), mpmath.mpc(w), mpmath.mpc(dz), mpmath.mpc(dw))
                if quadrado > 0:
                    melhor = max(melhor, float(mpmath.log(quadrado) / 2))
            perfil.append(melhor)
    return perfil
