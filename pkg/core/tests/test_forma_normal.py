import cmath
import math

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.exceptions import TruncationLoss
from core.filtracao import Modo, choose_constants, min_large_c
from core.forma_normal import (
    LOG_PROFUNDO_MIN,
    DiscoFolha,
    ModelMapG,
    grade_quadrada,
    leaf_confinement_defect,
    leaf_point,
    level_defect,
    model_G_apply,
    model_G_pow,
    psi,
    psi_inverse,
    theta_grid,
    theta_region_index,
    trace_leaf,
    verticality_slope,
)
from core.henon import AffinePoint, HenonSystem, iterate_ext

GRADE_PEQUENA = theta_grid(8, 4)


class CartaTests(SimpleTestCase):

    def test_psi(self):
        self.assertEqual(psi(AffinePoint(2, 4)), (0.5, 2))

    def test_psi_ida_e_volta(self):
        p = psi_inverse(psi(AffinePoint(3 - 1j, 0.5j)))
        self.assertAlmostEqual(p.z, 3 - 1j)
        self.assertAlmostEqual(p.w, 0.5j)

    def test_psi_em_zero(self):
        with self.assertRaises(ZeroDivisionError):
            psi(AffinePoint(0, 1))


class MapaModeloTests(SimpleTestCase):

    def setUp(self):
        self.G = ModelMapG(2, 1)

    def test_exemplos(self):
        x, y = model_G_apply(self.G, (0.1, 0))
        self.assertAlmostEqual(x, 0.01)
        self.assertAlmostEqual(y, 0.1)
        x, y = model_G_apply(self.G, (0.5, 1))
        self.assertAlmostEqual(x, 0.25)
        self.assertAlmostEqual(y, 0.625)

    def test_r_precisa_se_anular(self):
        with self.assertRaises(ValueError):
            ModelMapG(2, 1, (0.5, 1))
        with self.assertRaises(ValueError):
            ModelMapG(1, 1)

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(0.3, 0.9),
        st.floats(-math.pi, math.pi),
        st.complex_numbers(max_magnitude=2),
        st.integers(1, 3),
    )
    def test_potencia_ida_e_volta(self, raio, fase, y, n):
        x = cmath.rect(raio, fase)
        imagem = model_G_pow(self.G, (x, y), n)
        x_volta, y_volta = model_G_pow(self.G, imagem, -n, x_root=x)
        self.assertTrue(cmath.isclose(x_volta, x, rel_tol=1e-9))
        self.assertTrue(cmath.isclose(y_volta, y, rel_tol=1e-7, abs_tol=1e-9))

    def test_perda_por_truncagem(self):
        G = ModelMapG(2, 1, (0, 1))
        with self.assertRaises(TruncationLoss):
            model_G_pow(G, (0.5, 0), 2)


class FolhaTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.sistema = HenonSystem.quadratic()
        cls.k = choose_constants(cls.sistema, Modo.RELAXED, n_samples=10_000)
        cls.c = min_large_c(cls.sistema, cls.k, 2_000)
        cls.L = trace_leaf(cls.sistema, cls.k, cls.c)
        cls.disco = DiscoFolha(cls.sistema, cls.k, cls.L)

    def test_centro_e_a_base(self):
        p = leaf_point(self.sistema, self.k, self.L, 0j, self.disco)
        escala = max(1, abs(self.L.base.z), abs(self.L.base.w))
        self.assertLess(abs(complex(p.z) - self.L.base.z) / escala, 1e-9)
        self.assertLess(abs(complex(p.w) - self.L.base.w) / escala, 1e-9)

    def test_theta_fora_do_disco(self):
        with self.assertRaises(ValueError):
            leaf_point(self.sistema, self.k, self.L, 1.5, self.disco)

    def test_nivel_constante(self):
        defeito = level_defect(self.sistema, self.k, self.L, GRADE_PEQUENA)
        self.assertLessEqual(defeito, 1e-6 * max(1, self.c))

    def test_vertical(self):
        self.assertLess(verticality_slope(self.sistema, self.k, self.L, GRADE_PEQUENA, disco=self.disco), 1)

    def test_confinamento(self):
        desvio_log, desvio_fase = leaf_confinement_defect(self.sistema, self.k, self.L, GRADE_PEQUENA)
        self.assertLess(desvio_log, 1e-6)
        self.assertLess(desvio_fase, 1e-6)

    def test_profundidade_automatica(self):
        limiar = max(math.log(1 / self.k.c_phi), LOG_PROFUNDO_MIN, math.log(4 * self.k.R))
        zx, _ = iterate_ext(self.sistema, self.L.base, self.L.depth)
        self.assertGreaterEqual(zx.log_mag, limiar)
        if self.L.depth > 0:
            zx, wx = iterate_ext(self.sistema, self.L.base, self.L.depth - 1)
            fora_de_vplus = math.log(self.k.c_vplus) + wx.log_mag > zx.log_mag
            self.assertTrue(zx.log_mag < limiar or fora_de_vplus)

    def test_regiao_no_nivel_n(self):
        n = self.disco.n
        self.assertTrue(theta_region_index(self.sistema, self.k, self.L, 0j, n, self.disco))
        with self.assertRaises(ValueError):
            theta_region_index(self.sistema, self.k, self.L, 0j, n + 1, self.disco)


class GradeTests(SimpleTestCase):

    def test_theta_grid(self):
        grade = theta_grid(8, 4)
        self.assertEqual(grade[0], 0j)
        self.assertEqual(len(grade), 1 + 8 + 4)
        self.assertTrue(all(abs(t) <= 1 + 1e-12 for t in grade))

    def test_grade_quadrada_no_disco(self):
        self.assertTrue(all(abs(t) <= 1 for t in grade_quadrada(10)))
