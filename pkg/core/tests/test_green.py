import math

import mpmath
import numpy as np
from django.test import SimpleTestCase

from core.exceptions import BranchAmbiguity, NoBracket
from core.green import (
    Conjunto,
    Fatia,
    GreenParams,
    Status,
    bottcher_x,
    bottcher_x_precise,
    classify,
    green_many,
    green_minus,
    green_plus,
    green_plus_precise,
    level_set_seed,
    render_grid,
)
from core.henon import AffinePoint, HenonFactor, HenonSystem, apply_forward
from core.extcomplex import normalizar_fase


def sistemas_benchmark():
    return [
        HenonSystem.quadratic(),
        HenonSystem.quadratic(0.3, 0.5),
        HenonSystem((HenonFactor((0.1, 0, 1), 1), HenonFactor((-0.2j, 0, 1), 0.7))),
    ]


def pontos_escapando(rng, n):
    """Pontos com |z| moderado e |w| pequeno: escapam para frente"""
    z = rng.uniform(3, 30, n) * np.exp(2j * np.pi * rng.random(n))
    w = rng.uniform(0, 1, n) * np.exp(2j * np.pi * rng.random(n))
    return z, w


class GreenPlusTests(SimpleTestCase):

    def setUp(self):
        self.sistema = HenonSystem.quadratic()

    def test_ponto_fixo_limitado(self):
        g = green_plus(self.sistema, AffinePoint(2, 2))
        self.assertEqual(g.value, 0.0)
        self.assertEqual(g.status, Status.BOUNDED)

    def test_valor_conhecido(self):
        g = green_plus(self.sistema, AffinePoint(1e6, 0))
        self.assertTrue(g.escaped)
        self.assertAlmostEqual(g.value, math.log(1e6), delta=1e-6)

    def test_equacao_funcional(self):
        rng = np.random.default_rng(0)
        for sistema in sistemas_benchmark():
            z, w = pontos_escapando(rng, 300)
            g, _, escapou = green_many(sistema, z, w)
            self.assertTrue(escapou.all())
            fz, fw = z, w
            for fator in sistema.factors:
                fz, fw = fator.p(fz) - fator.a * fw, fz
            g_f, _, _ = green_many(sistema, fz, fw)
            erro = np.abs(g_f - sistema.d * g) / (1 + g)
            self.assertLess(erro.max(), 1e-8)

    def test_green_minus(self):
        g = green_minus(self.sistema, AffinePoint(0, 1e6))
        self.assertTrue(g.escaped)
        self.assertAlmostEqual(g.value, math.log(1e6), delta=1e-6)

    def test_lote_igual_escalar(self):
        z = np.array([1e6, 2 + 2j, 5])
        w = np.array([0, 0, 1])
        valores, _, escapou = green_many(self.sistema, z, w)
        for k in range(3):
            escalar = green_plus(self.sistema, AffinePoint(z[k], w[k]))
            self.assertEqual(bool(escapou[k]), escalar.escaped)
            self.assertAlmostEqual(valores[k], escalar.value, places=12)

    def test_precisao_estendida(self):
        p = AffinePoint(7 + 1j, 0.5)
        self.assertAlmostEqual(float(green_plus_precise(self.sistema, p, 50)), green_plus(self.sistema, p).value,
                               places=10)

    def test_parametros_invalidos(self):
        with self.assertRaises(ValueError):
            GreenParams(escape_radius=0.5)
        with self.assertRaises(ValueError):
            GreenParams(max_iter=0)


def pontos_escapando_para_tras(rng, n):
    """|w| moderado e |z| pequeno: escapam por f^-1"""
    w = rng.uniform(3, 30, n) * np.exp(2j * np.pi * rng.random(n))
    z = rng.uniform(0, 1, n) * np.exp(2j * np.pi * rng.random(n))
    return z, w


def green_minus_por_forca_bruta(sistema, z, w, ciclos=40):
    """log max(|z_n|, |w_n|) / D_n com f^-n em mpmath"""
    with mpmath.workdps(60):
        z, w = mpmath.mpc(z), mpmath.mpc(w)
        D = 1
        for _ in range(ciclos):
            for fator in reversed(sistema.factors):
                z, w = fator.inverse(z, w)
                D *= fator.degree
        return float(mpmath.log(max(abs(z), abs(w))) / D)


class GreenMinusTests(SimpleTestCase):

    def test_composto_com_a_unitario(self):
        sistema = HenonSystem((HenonFactor((0, 0, 1), 1), HenonFactor((0, 0, 1), 0.7)))
        g = green_minus(sistema, AffinePoint(0.5, 20))
        self.assertTrue(g.escaped)
        self.assertAlmostEqual(g.value, green_minus_por_forca_bruta(sistema, 0.5, 20), delta=1e-8)

    def test_confere_com_mpmath(self):
        rng = np.random.default_rng(3)
        for sistema in sistemas_benchmark():
            z, w = pontos_escapando_para_tras(rng, 20)
            valores, _, escapou = green_many(sistema, z, w, direction=-1)
            self.assertTrue(escapou.all())
            for k in range(z.size):
                esperado = green_minus_por_forca_bruta(sistema, z[k], w[k])
                self.assertAlmostEqual(valores[k], esperado, delta=1e-8 * (1 + esperado))

    def test_equacao_funcional(self):
        rng = np.random.default_rng(4)
        for sistema in sistemas_benchmark():
            z, w = pontos_escapando_para_tras(rng, 300)
            g, _, escapou = green_many(sistema, z, w, direction=-1)
            self.assertTrue(escapou.all())
            iz, iw = z, w
            for fator in reversed(sistema.factors):
                iz, iw = fator.inverse(iz, iw)
            g_inv, _, _ = green_many(sistema, iz, iw, direction=-1)
            erro = np.abs(g_inv - sistema.d * g) / (1 + g)
            self.assertLess(erro.max(), 1e-8)


class ClassificacaoTests(SimpleTestCase):

    def setUp(self):
        self.sistema = HenonSystem.quadratic()

    def test_ponto_fixo(self):
        classe = classify(self.sistema, AffinePoint(2, 2))
        self.assertEqual((classe.plus, classe.minus), (Conjunto.K_PLUS, Conjunto.K_MINUS))
        self.assertTrue(classe.budget_limited)

    def test_escape(self):
        self.assertEqual(classify(self.sistema, AffinePoint(1e6, 0)).plus, Conjunto.U_PLUS)

    def test_invariancia(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            p = AffinePoint(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
            antes = classify(self.sistema, p)
            depois = classify(self.sistema, apply_forward(self.sistema, p))
            self.assertEqual(antes.plus, depois.plus)
            self.assertEqual(antes.minus, depois.minus)


class BottcherTests(SimpleTestCase):

    def test_modulo(self):
        rng = np.random.default_rng(1)
        for sistema in sistemas_benchmark():
            z, w = pontos_escapando(rng, 100)
            for zk, wk in zip(z * 10, w):
                p = AffinePoint(zk, wk)
                x = bottcher_x(sistema, p)
                self.assertAlmostEqual(x.log_mag, -green_plus(sistema, p).value, delta=1e-8)

    def test_equivariancia(self):
        rng = np.random.default_rng(2)
        for sistema in sistemas_benchmark():
            z, w = pontos_escapando(rng, 100)
            for zk, wk in zip(z * 10, w):
                p = AffinePoint(zk, wk)
                x = bottcher_x(sistema, p)
                x_f = bottcher_x(sistema, apply_forward(sistema, p))
                self.assertAlmostEqual(x_f.log_mag, sistema.d * x.log_mag, delta=1e-6 * abs(x_f.log_mag))
                self.assertLess(abs(normalizar_fase(x_f.phase - sistema.d * x.phase)), 1e-6)

    def test_simetria_real(self):
        sistema = HenonSystem.quadratic(0.3, 0.5)
        for z in (40.0, -55.0, 120.0):
            fase = bottcher_x(sistema, AffinePoint(z, 1.5)).phase
            self.assertLess(min(abs(fase), abs(abs(fase) - math.pi)), 1e-8)

    def test_ramo_ambiguo(self):
        with self.assertRaises(BranchAmbiguity):
            bottcher_x(HenonSystem.quadratic(), AffinePoint(1.1, 1.0))

    def test_precisao_estendida(self):
        sistema = HenonSystem.quadratic()
        p = AffinePoint(80 + 5j, 3)
        x = bottcher_x(sistema, p)
        preciso = bottcher_x_precise(sistema, p, 40)
        self.assertAlmostEqual(math.log(abs(complex(preciso))), x.log_mag, places=12)


class SementeNivelTests(SimpleTestCase):

    def setUp(self):
        self.sistema = HenonSystem.quadratic()

    def test_raio_horizontal(self):
        c = math.log(1e6)
        semente = level_set_seed(self.sistema, c, AffinePoint(1, 0))
        self.assertLess(abs(abs(semente.z) - 1e6) / 1e6, 1e-4)
        self.assertAlmostEqual(green_plus(self.sistema, semente).value, c, delta=1e-8 * c)

    def test_imagem_no_nivel_d_c(self):
        c = 3.0
        semente = level_set_seed(self.sistema, c, AffinePoint(1, 0.2j))
        imagem = apply_forward(self.sistema, semente)
        self.assertAlmostEqual(green_plus(self.sistema, imagem).value, 2 * c, delta=1e-7)

    def test_nivel_invalido(self):
        with self.assertRaises(ValueError):
            level_set_seed(self.sistema, 0.0, AffinePoint(1, 0))
        with self.assertRaises(NoBracket):
            level_set_seed(self.sistema, 1.0, AffinePoint(0, 0))


class RenderTests(SimpleTestCase):

    def setUp(self):
        self.sistema = HenonSystem.quadratic()

    def test_regiao_limitada(self):
        fatia = Fatia.parse('re_z,im_z:re_w=0,im_w=0')
        valores = render_grid(self.sistema, (-0.1, 0.1, -0.1, 0.1), (5, 4), fatia)
        self.assertEqual((len(valores), len(valores[0])), (4, 5))
        self.assertTrue(all(v.value == 0.0 for linha in valores for v in linha))

    def test_assintotica_em_v_plus(self):
        valores = render_grid(self.sistema, (1e3, 1e4, 0, 0), (16, 1))
        for x, v in zip(np.linspace(1e3, 1e4, 16), valores[0]):
            self.assertAlmostEqual(v.value, math.log(x), delta=1e-3)

    def test_threads_nao_mudam_resultado(self):
        janela = (-2, 2, -2, 2)
        sequencial = render_grid(self.sistema, janela, (12, 12), threads=1)
        paralelo = render_grid(self.sistema, janela, (12, 12), threads=4)
        self.assertEqual(sequencial, paralelo)

    def test_refinamento_coerente(self):
        janela = (-2, 2, -2, 2)
        grossa = render_grid(self.sistema, janela, (5, 5))
        fina = render_grid(self.sistema, janela, (9, 9))
        for j in range(5):
            for i in range(5):
                self.assertEqual(grossa[j][i].status, fina[2 * j][2 * i].status)

    def test_fatia_invalida(self):
        with self.assertRaises(ValueError):
            Fatia.parse('re_z')
        with self.assertRaises(ValueError):
            Fatia('re_z', 're_z')
