"""
Séries de Laurent truncadas com coeficientes racionais gaussianos.

Certifica que nenhuma curva holomorfa passa por I+ dentro de um
subnível fechado de g+, empurrando o germe (z(θ), t(θ)) pela extensão
projetiva de cada fator e acompanhando as ordens de anulamento.

Uso:
    z = LaurentSeries.monomio(1, trunc_order=24)
    t = LaurentSeries.from_coeffs(2, [1, 1], trunc_order=24)
    certificado = certify_no_curve(HenonSystem.quadratic(), z, t, N=2)
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .exceptions import MapDefinitionError, TruncationExhausted

logger = logging.getLogger(__name__)

INFINITO = math.inf


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 're', Fraction(self.re))
        object.__setattr__(self, 'im', Fraction(self.im))

    @classmethod
    def of(cls, valor):
        if isinstance(valor, GaussianRational):
            return valor
        if isinstance(valor, complex):
            return cls(Fraction(valor.real), Fraction(valor.imag))
        return cls(Fraction(valor))

    @classmethod
    def from_list(cls, quatro):
        """[num_re, den_re, num_im, den_im]"""
        if len(quatro) != 4:
            raise MapDefinitionError(f"Coeficiente deve ter 4 inteiros: {quatro}")
        return cls(Fraction(int(quatro[0]), int(quatro[1])), Fraction(int(quatro[2]), int(quatro[3])))

    def as_list(self):
        return [self.re.numerator, self.re.denominator, self.im.numerator, self.im.denominator]

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, outro):
        outro = GaussianRational.of(outro)
        return GaussianRational(self.re + outro.re, self.im + outro.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, outro):
        return self + (-GaussianRational.of(outro))

    def __rsub__(self, outro):
        return GaussianRational.of(outro) - self

    def __mul__(self, outro):
        outro = GaussianRational.of(outro)
        return GaussianRational(
            self.re * outro.re - self.im * outro.im,
            self.re * outro.im + self.im * outro.re,
        )

    __rmul__ = __mul__

    def norma2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, outro):
        outro = GaussianRational.of(outro)
        n = outro.norma2()
        if n == 0:
            raise ZeroDivisionError("divisão por racional gaussiano nulo")
        conjugado = GaussianRational(outro.re / n, -outro.im / n)
        return self * conjugado

    def __eq__(self, outro):
        try:
            outro = GaussianRational.of(outro)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == outro.re and self.im == outro.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


ZERO = GaussianRational()
UM = GaussianRational(1)


class LaurentSeries:
    """θ^valuation · (coeffs[0] + coeffs[1]θ + ...), conhecida para expoentes < trunc_order.

    A série nula é representada por valuation = inf e coeffs vazio; nesse caso
    trunc_order marca até onde se sabe que ela é zero.
    """

    __slots__ = ('valuation', 'coeffs', 'trunc_order')

    def __init__(self, valuation, coeffs, trunc_order):
        coeffs = [GaussianRational.of(c) for c in coeffs]
        # normaliza: primeiro coeficiente não nulo vira o líder
        inicio = 0
        while inicio < len(coeffs) and not coeffs[inicio]:
            inicio += 1
        if valuation == INFINITO or inicio == len(coeffs):
            self.valuation = INFINITO
            self.coeffs = []
        else:
            self.valuation = valuation + inicio
            self.coeffs = coeffs[inicio:trunc_order - valuation]
            if not self.coeffs:
                self.valuation = INFINITO
        self.trunc_order = trunc_order
        if self.valuation != INFINITO and self.trunc_order <= self.valuation:
            raise TruncationExhausted(
                f"trunc_order {trunc_order} não passa da valuação {self.valuation}"
            )
        if self.coeffs:
            self.coeffs += [ZERO] * (self.trunc_order - self.valuation - len(self.coeffs))

    # ------------------------------------------------------------------
    @classmethod
    def from_coeffs(cls, valuation, coeffs, trunc_order):
        return cls(valuation, coeffs, trunc_order)

    @classmethod
    def monomio(cls, k, trunc_order, coeficiente=1):
        return cls(k, [coeficiente], trunc_order)

    @classmethod
    def zero(cls, trunc_order):
        return cls(INFINITO, [], trunc_order)

    @property
    def is_zero(self):
        return self.valuation == INFINITO

    @property
    def precisao(self):
        """Número de coeficientes conhecidos a partir do líder"""
        return self.trunc_order - self.valuation if not self.is_zero else 0

    def coef(self, k):
        if k >= self.trunc_order:
            raise TruncationExhausted(f"coeficiente θ^{k} além de trunc_order {self.trunc_order}")
        if self.is_zero or k < self.valuation:
            return ZERO
        return self.coeffs[k - self.valuation]

    def __repr__(self):
        if self.is_zero:
            return f"O(θ^{self.trunc_order})"
        termos = [f"{c}θ^{self.valuation + j}" for j, c in enumerate(self.coeffs) if c][:6]
        return ' + '.join(termos) + f" + O(θ^{self.trunc_order})"

    def __eq__(self, outra):
        if not isinstance(outra, LaurentSeries):
            return NotImplemented
        return (self.valuation == outra.valuation and self.trunc_order == outra.trunc_order
                and self.coeffs == outra.coeffs)

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------
    def __add__(self, outra):
        if not isinstance(outra, LaurentSeries):
            return self.mais_constante(outra)
        trunc = min(self.trunc_order, outra.trunc_order)
        inicio = min(self.valuation, outra.valuation)
        if inicio == INFINITO or inicio >= trunc:
            return LaurentSeries.zero(trunc)
        return LaurentSeries(inicio, [self.coef(k) + outra.coef(k) for k in range(inicio, trunc)], trunc)

    __radd__ = __add__

    def __neg__(self):
        return self.escalar(-UM)

    def __sub__(self, outra):
        return self + (-outra)

    def escalar(self, c):
        c = GaussianRational.of(c)
        if not c:
            return LaurentSeries.zero(self.trunc_order)
        return LaurentSeries(self.valuation, [c * x for x in self.coeffs], self.trunc_order)

    def mais_constante(self, c):
        c = GaussianRational.of(c)
        if self.trunc_order <= 0 or not c:
            return self
        inicio = min(0, self.valuation) if not self.is_zero else 0
        return LaurentSeries(
            inicio,
            [self.coef(k) + (c if k == 0 else ZERO) for k in range(inicio, self.trunc_order)],
            self.trunc_order,
        )

    def deslocar(self, k):
        """Multiplica por θ^k"""
        if self.is_zero:
            return LaurentSeries.zero(self.trunc_order + k)
        return LaurentSeries(self.valuation + k, self.coeffs, self.trunc_order + k)

    def __mul__(self, outra):
        if not isinstance(outra, LaurentSeries):
            return self.escalar(outra)
        if self.is_zero and outra.is_zero:
            return LaurentSeries.zero(self.trunc_order + outra.trunc_order)
        if self.is_zero:
            return LaurentSeries.zero(self.trunc_order + outra.valuation)
        if outra.is_zero:
            return LaurentSeries.zero(outra.trunc_order + self.valuation)
        precisao = min(self.precisao, outra.precisao)
        produto = [ZERO] * precisao
        for i, a in enumerate(self.coeffs[:precisao]):
            if not a:
                continue
            for j, b in enumerate(outra.coeffs[:precisao - i]):
                if b:
                    produto[i + j] = produto[i + j] + a * b
        valuation = self.valuation + outra.valuation
        return LaurentSeries(valuation, produto, valuation + precisao)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if k == 0:
            return LaurentSeries.monomio(0, max(self.precisao, 1))
        resultado, base = self, self
        for _ in range(k - 1):
            resultado = resultado * base
        return resultado

    def reciprocal(self):
        if self.is_zero:
            raise TruncationExhausted("recíproca de série sem coeficiente conhecido não nulo")
        lider = self.coeffs[0]
        inverso = [ZERO] * self.precisao
        inverso[0] = UM / lider
        for k in range(1, self.precisao):
            soma = ZERO
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    soma = soma + self.coeffs[j] * inverso[k - j]
            inverso[k] = -soma / lider
        return LaurentSeries(-self.valuation, inverso, -self.valuation + self.precisao)

    def __truediv__(self, outra):
        if not isinstance(outra, LaurentSeries):
            return self.escalar(UM / GaussianRational.of(outra))
        return self * outra.reciprocal()

    # ------------------------------------------------------------------
    # JSON
    # ------------------------------------------------------------------
    def as_dict(self):
        return {
            'valuation': None if self.is_zero else self.valuation,
            'coeffs': [c.as_list() for c in self.coeffs],
            'trunc_order': self.trunc_order,
        }

    @classmethod
    def from_dict(cls, dado, trunc_order=None):
        try:
            valuation = int(dado['valuation'])
            coeffs = [GaussianRational.from_list(c) for c in dado['coeffs']]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise MapDefinitionError(f"Série mal formada: {e}") from e
        trunc = max(int(dado.get('trunc_order') or trunc_order or 0), valuation + len(coeffs))
        return cls(valuation, coeffs, trunc)


def valuation(serie):
    return serie.valuation


def poly_compose(coeficientes, serie):
    """p(serie) por Horner; coeficientes do termo de maior grau ao constante"""
    coeficientes = [GaussianRational.of(c) for c in coeficientes]
    if not coeficientes:
        return LaurentSeries.zero(serie.trunc_order)
    acumulado = serie.escalar(coeficientes[0])
    for c in coeficientes[1:-1]:
        acumulado = (acumulado + c) * serie
    if len(coeficientes) > 1:
        acumulado = acumulado + coeficientes[-1]
    else:
        acumulado = LaurentSeries(0, [coeficientes[0]], max(serie.trunc_order, 1))
    return acumulado


# ----------------------------------------------------------------------
# Certificados
# ----------------------------------------------------------------------
class Veredito(str, Enum):
    ORDER_RELATION_VIOLATED = 'OrderRelationViolated'
    NOT_DIVISIBLE = 'NotDivisible'
    NONVANISHING_IMAGE = 'NonvanishingImage'
    ORDER_OVERFLOW = 'OrderOverflow'
    INCONCLUSIVE = 'Inconclusive'


@dataclass
class Certificate:
    verdict: Veredito
    step: int
    data: dict = field(default_factory=dict)

    @property
    def contradicao(self):
        return self.verdict != Veredito.INCONCLUSIVE

    def as_dict(self):
        return {'verdict': self.verdict.value, 'step': self.step, 'data': self.data}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, ensure_ascii=False, default=str)


def _coeficientes_exatos(fator):
    """Coeficientes de p do maior grau ao constante, com a, como racionais gaussianos"""
    try:
        coeficientes = [GaussianRational.of(complex(c)) for c in reversed(fator.coeffs)]
        a = GaussianRational.of(complex(fator.a))
    except (TypeError, ValueError) as e:
        raise MapDefinitionError(f"Coeficiente não representável exatamente: {e}") from e
    return coeficientes, a


def curve_push(factor, z, t, step=0):
    """Empurra o germe [z : 1 : t] por um fator: z1 = (t·p(z/t) - a)/z, t1 = t/z.

    Devolve (z1, t1, None) ou (None, None, Certificate) quando uma das
    relações de ordem é contrariada.
    """
    d = factor.degree
    alfa, beta = z.valuation, t.valuation
    dados = {'alpha': alfa, 'beta': beta, 'd': d}
    if z.is_zero or t.is_zero:
        raise TruncationExhausted(f"germe sem coeficiente conhecido no passo {step}")
    if alfa < 1 or beta <= alfa:
        return None, None, Certificate(Veredito.ORDER_RELATION_VIOLATED, step,
                                       {**dados, 'relacao': 'beta > alpha >= 1'})
    if alfa % (d - 1):
        return None, None, Certificate(Veredito.NOT_DIVISIBLE, step,
                                       {**dados, 'relacao': 'alpha divisível por d-1'})
    if d * alfa != (d - 1) * beta:
        return None, None, Certificate(Veredito.ORDER_RELATION_VIOLATED, step,
                                       {**dados, 'relacao': 'd*alpha = (d-1)*beta'})

    coeficientes, a = _coeficientes_exatos(factor)
    imagem = t * poly_compose(coeficientes, z / t) - a
    constante = imagem.coef(0)
    if constante:
        return None, None, Certificate(Veredito.NONVANISHING_IMAGE, step,
                                       {**dados, 'termo_constante': constante.as_list()})
    z1 = imagem / z
    t1 = t / z
    if z1.is_zero:
        # val(z1) >= trunc_order: basta que isso já alcance val(t1)
        if z1.trunc_order >= t1.valuation:
            return None, None, Certificate(Veredito.ORDER_RELATION_VIOLATED, step,
                                           {**dados, 'alpha_seguinte': f'>= {z1.trunc_order}',
                                            'beta_seguinte': t1.valuation, 'relacao': 'beta > alpha'})
        raise TruncationExhausted(f"z1 sem coeficiente conhecido não nulo no passo {step}")
    if z1.valuation < 1:
        return None, None, Certificate(Veredito.NONVANISHING_IMAGE, step,
                                       {**dados, 'alpha_seguinte': z1.valuation})
    if t1.valuation <= z1.valuation:
        return None, None, Certificate(Veredito.ORDER_RELATION_VIOLATED, step,
                                       {**dados, 'alpha_seguinte': z1.valuation, 'beta_seguinte': t1.valuation,
                                        'relacao': 'beta > alpha'})
    return z1, t1, None


def truncagem_padrao(N):
    return 8 * (N + 2)


def certify_no_curve(sys, z, t, N):
    """Percorre os fatores ciclicamente (f_1 primeiro) até achar uma contradição.

    Σ α_i sobre os passos já dados nunca pode alcançar N, porque
    t = t_{m+1} · Π z_i e t_{m+1} ainda anula com ordem > α_{m+1} >= 1.
    """
    if t.valuation != N:
        raise ValueError(f"valuação de t ({t.valuation}) difere de N = {N}")
    if z.is_zero or z.valuation < 1:
        raise ValueError("z precisa anular em θ = 0")
    soma_alfas = 0
    passo = 0
    while True:
        fator = sys.factors[passo % sys.N]
        alfa = z.valuation
        if soma_alfas + alfa >= N:
            return Certificate(Veredito.ORDER_OVERFLOW, passo,
                               {'soma_alphas': soma_alfas + alfa, 'N': N, 'alpha': alfa})
        try:
            z, t, certificado = curve_push(fator, z, t, passo)
        except TruncationExhausted as e:
            logger.warning(f"Truncagem esgotada no passo {passo}: {e}")
            return Certificate(Veredito.INCONCLUSIVE, passo, {'motivo': str(e), 'N': N, 'soma_alphas': soma_alfas})
        if certificado is not None:
            certificado.data['N'] = N
            certificado.data['soma_alphas'] = soma_alfas
            return certificado
        soma_alfas += alfa
        passo += 1


def ler_entrada(caminho, N=None):
    """Lê {"N": ..., "z": {...}, "t": {...}} de um JSON"""
    try:
        dado = json.loads(Path(caminho).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as e:
        raise MapDefinitionError(f"Não foi possível ler {caminho}: {e}") from e
    N = N if N is not None else dado.get('N')
    if N is None:
        raise MapDefinitionError("N não informado")
    N = int(N)
    trunc = int(dado.get('trunc_order') or truncagem_padrao(N))
    return (LaurentSeries.from_dict(dado['z'], trunc), LaurentSeries.from_dict(dado['t'], trunc), N)
