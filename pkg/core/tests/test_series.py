import json
import tempfile
from fractions import Fraction
from pathlib import Path

import sympy
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.exceptions import MapDefinitionError, TruncationExhausted
from core.henon import HenonFactor, HenonSystem
from core.series import (
    Certificate,
    GaussianRational,
    LaurentSeries,
    Veredito,
    certify_no_curve,
    curve_push,
    ler_entrada,
    poly_compose,
    truncagem_padrao,
)

T = 24
THETA = sympy.Symbol('theta')


def serie(valuation, coeffs, trunc=T):
    return LaurentSeries.from_coeffs(valuation, coeffs, trunc)


def para_sympy(c):
    c = GaussianRational.of(c)
    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)


racionais = st.fractions(min_value=-3, max_value=3, max_denominator=4)
gaussianos = st.builds(GaussianRational, racionais, racionais)
gaussianos_nao_nulos = gaussianos.filter(bool)


class RacionalGaussianoTests(SimpleTestCase):

    def test_lista(self):
        g = GaussianRational.from_list([1, 2, 3, 4])
        self.assertEqual(g, GaussianRational(Fraction(1, 2), Fraction(3, 4)))
        self.assertEqual(g.as_list(), [1, 2, 3, 4])

    def test_lista_invalida(self):
        with self.assertRaises(MapDefinitionError):
            GaussianRational.from_list([1, 2, 3])

    def test_aritmetica(self):
        i = GaussianRational(0, 1)
        self.assertEqual(i * i, -1)
        self.assertEqual((1 + i) / (1 - i), i)
        with self.assertRaises(ZeroDivisionError):
            i / 0


class LaurentTests(SimpleTestCase):

    def test_produto_de_monomios(self):
        produto = LaurentSeries.monomio(1, T) * LaurentSeries.monomio(2, T)
        self.assertEqual(produto.valuation, 3)
        self.assertEqual(produto.coef(3), 1)
        self.assertEqual(produto.coef(4), 0)

    def test_reciproca(self):
        inversa = serie(0, [1, 1], 8).reciprocal()
        self.assertEqual([inversa.coef(k) for k in range(8)], [1, -1, 1, -1, 1, -1, 1, -1])

    def test_reciproca_desloca_valuacao(self):
        inversa = serie(2, [2], 10).reciprocal()
        self.assertEqual(inversa.valuation, -2)
        self.assertEqual(inversa.coef(-2), Fraction(1, 2))

    def test_cancelamento_vira_zero(self):
        s = serie(1, [1, 2, 3])
        diferenca = s - s
        self.assertTrue(diferenca.is_zero)
        self.assertEqual(diferenca.trunc_order, T)

    def test_coeficiente_alem_da_truncagem(self):
        with self.assertRaises(TruncationExhausted):
            serie(0, [1], 5).coef(5)

    def test_potencia_zero(self):
        um = serie(1, [1, 1]) ** 0
        self.assertEqual(um.valuation, 0)
        self.assertEqual(um.coef(0), 1)

    def test_poly_compose(self):
        # p(x) = x² + 1 em x = θ
        composto = poly_compose([1, 0, 1], LaurentSeries.monomio(1, T))
        self.assertEqual([composto.coef(k) for k in range(4)], [1, 0, 1, 0])

    @settings(max_examples=500, deadline=None)
    @given(
        st.sampled_from(['soma', 'produto', 'reciproca', 'divisao']),
        st.integers(-3, 3),
        st.lists(gaussianos, min_size=0, max_size=5),
        gaussianos_nao_nulos,
        st.integers(-3, 3),
        st.lists(gaussianos, min_size=0, max_size=5),
        gaussianos_nao_nulos,
    )
    def test_aritmetica_confere_com_sympy(self, operacao, va, resto_a, lider_a, vb, resto_b, lider_b):
        a = [lider_a] + resto_a
        b = [lider_b] + resto_b
        A = serie(va, a, va + len(a))
        B = serie(vb, b, vb + len(b))
        pa = sum(para_sympy(c) * THETA ** j for j, c in enumerate(a))
        pb = sum(para_sympy(c) * THETA ** j for j, c in enumerate(b))
        if operacao == 'soma':
            obtida = A + B
            inicio = min(va, vb)
            esperada = THETA ** (va - inicio) * pa + THETA ** (vb - inicio) * pb
            trunc = min(va + len(a), vb + len(b))
        elif operacao == 'produto':
            obtida, inicio, esperada = A * B, va + vb, pa * pb
            trunc = inicio + min(len(a), len(b))
        elif operacao == 'reciproca':
            obtida, inicio = B.reciprocal(), -vb
            trunc = inicio + len(b)
            esperada = sympy.series(1 / pb, THETA, 0, len(b)).removeO()
        else:
            obtida, inicio = A / B, va - vb
            trunc = inicio + min(len(a), len(b))
            esperada = sympy.series(pa / pb, THETA, 0, min(len(a), len(b))).removeO()
        esperada = sympy.expand(esperada)
        self.assertEqual(obtida.trunc_order, trunc)
        for k in range(inicio, trunc):
            diferenca = para_sympy(obtida.coef(k)) - esperada.coeff(THETA, k - inicio)
            self.assertEqual(sympy.expand(diferenca), 0)

    def test_json(self):
        s = serie(2, [GaussianRational(Fraction(1, 3), 2), 0, -1], 9)
        self.assertEqual(LaurentSeries.from_dict(s.as_dict()), s)

    def test_json_mal_formado(self):
        with self.assertRaises(MapDefinitionError):
            LaurentSeries.from_dict({'coeffs': []})


class EmpurraoTests(SimpleTestCase):

    def setUp(self):
        self.quadratico = HenonFactor((0, 0, 1), 1)
        self.cubico = HenonFactor((0, 0, 0, 1), 1)

    def test_imagem_nao_nula(self):
        # z = θ, t = θ² + θ³: z1 = -1 + θ - ... não anula
        z1, t1, certificado = curve_push(self.quadratico, LaurentSeries.monomio(1, T), serie(2, [1, 1]))
        self.assertIsNone(z1)
        self.assertEqual(certificado.verdict, Veredito.NONVANISHING_IMAGE)
        self.assertEqual(certificado.step, 0)

    def test_nao_divisivel(self):
        _, _, certificado = curve_push(self.cubico, LaurentSeries.monomio(1, T), LaurentSeries.monomio(2, T))
        self.assertEqual(certificado.verdict, Veredito.NOT_DIVISIBLE)

    def test_relacao_de_ordem(self):
        _, _, certificado = curve_push(self.quadratico, LaurentSeries.monomio(1, T), LaurentSeries.monomio(3, T))
        self.assertEqual(certificado.verdict, Veredito.ORDER_RELATION_VIOLATED)

    def test_passo_bem_sucedido_preserva_produto(self):
        # z = θ², t = θ⁴/(1 + θ³): z1 = θ, t1 = θ²/(1 + θ³)
        z = LaurentSeries.monomio(2, T)
        t = LaurentSeries.monomio(4, T) / serie(0, [1, 0, 0, 1])
        z1, t1, certificado = curve_push(self.quadratico, z, t)
        self.assertIsNone(certificado)
        self.assertEqual(z1.valuation, 1)
        self.assertEqual(t1.valuation, 2)
        reconstruido = t1 * z
        for k in range(4, reconstruido.trunc_order):
            self.assertEqual(reconstruido.coef(k), t.coef(k))


class CertificadoTests(SimpleTestCase):

    def setUp(self):
        self.sistema = HenonSystem.quadratic()

    def test_dois_passos(self):
        z = LaurentSeries.monomio(2, T)
        t = LaurentSeries.monomio(4, T) / serie(0, [1, 0, 0, 1])
        certificado = certify_no_curve(self.sistema, z, t, 4)
        self.assertEqual(certificado.verdict, Veredito.ORDER_RELATION_VIOLATED)
        self.assertEqual(certificado.step, 1)
        self.assertTrue(certificado.contradicao)

    def test_estouro_de_ordem(self):
        certificado = certify_no_curve(self.sistema, LaurentSeries.monomio(1, T), LaurentSeries.monomio(1, T), 1)
        self.assertEqual(certificado.verdict, Veredito.ORDER_OVERFLOW)
        self.assertEqual(certificado.step, 0)

    def test_imagem_identicamente_nula_viola_ordem(self):
        # z²/t = 1 exatamente: z1 anula além da truncagem, acima de val(t1) = 1
        certificado = certify_no_curve(self.sistema, LaurentSeries.monomio(1, T), LaurentSeries.monomio(2, T), 2)
        self.assertEqual(certificado.verdict, Veredito.ORDER_RELATION_VIOLATED)
        self.assertEqual(certificado.step, 0)
        self.assertEqual(certificado.data['beta_seguinte'], 1)
        self.assertTrue(certificado.contradicao)

    def test_imagem_nula_com_coeficientes_gaussianos(self):
        # z = (1+i)θ², t = (2i)θ⁴: t·(z/t)² = 1
        z = LaurentSeries.monomio(2, T, GaussianRational(1, 1))
        t = LaurentSeries.monomio(4, T, GaussianRational(0, 2))
        certificado = certify_no_curve(self.sistema, z, t, 4)
        self.assertEqual(certificado.verdict, Veredito.ORDER_RELATION_VIOLATED)
        self.assertEqual(certificado.step, 0)

    def test_valuacao_de_t_confere_com_N(self):
        with self.assertRaises(ValueError):
            certify_no_curve(self.sistema, LaurentSeries.monomio(1, T), LaurentSeries.monomio(2, T), 3)

    def test_json_do_certificado(self):
        certificado = Certificate(Veredito.NOT_DIVISIBLE, 0, {'alpha': 1})
        self.assertEqual(json.loads(certificado.to_json())['verdict'], 'NotDivisible')

    @settings(max_examples=200, deadline=None)
    @given(
        st.sampled_from([2, 3, 4]),
        st.sampled_from([0, 0.5, -0.25j, 1 + 0.5j]),
        st.sampled_from([1, -0.5, 0.25j]),
        st.integers(2, 8),
        st.integers(1, 8),
        gaussianos_nao_nulos,
        st.lists(gaussianos, max_size=4),
        gaussianos_nao_nulos,
        st.lists(gaussianos, max_size=4),
    )
    def test_termina_com_contradicao(self, d, c0, a, N, alfa, lider_z, resto_z, lider_t, resto_t):
        alfa = min(alfa, N)
        sistema = HenonSystem((HenonFactor((c0,) + (0,) * (d - 1) + (1,), a),))
        trunc = truncagem_padrao(N)
        z = serie(alfa, [lider_z] + resto_z, trunc)
        t = serie(N, [lider_t] + resto_t, trunc)
        certificado = certify_no_curve(sistema, z, t, N)
        self.assertNotEqual(certificado.verdict, Veredito.INCONCLUSIVE)
        self.assertLessEqual(certificado.step, N)
        if certificado.verdict == Veredito.ORDER_OVERFLOW:
            self.assertGreaterEqual(certificado.data['soma_alphas'], N)
        self.assertEqual(certificado.as_dict(), certify_no_curve(sistema, z, t, N).as_dict())


class EntradaTests(SimpleTestCase):

    def test_ler_entrada_completa_truncagem(self):
        dado = {
            'N': 2,
            'z': {'valuation': 1, 'coeffs': [[1, 1, 0, 1]]},
            't': {'valuation': 2, 'coeffs': [[1, 1, 0, 1], [1, 1, 0, 1]]},
        }
        with tempfile.TemporaryDirectory() as pasta:
            caminho = Path(pasta) / 'serie.json'
            caminho.write_text(json.dumps(dado), encoding='utf-8')
            z, t, N = ler_entrada(caminho)
        self.assertEqual(N, 2)
        self.assertEqual(z.trunc_order, truncagem_padrao(2))
        self.assertEqual(t.coef(3), 1)
        self.assertEqual(t.coef(4), 0)

    def test_sem_N(self):
        with tempfile.TemporaryDirectory() as pasta:
            caminho = Path(pasta) / 'serie.json'
            caminho.write_text(json.dumps({'z': {}, 't': {}}), encoding='utf-8')
            with self.assertRaises(MapDefinitionError):
                ler_entrada(caminho)
