import json
import math
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from core.filtracao import RelatorioFiltracao
from core.models import ExecucaoLog

MAPA_CUBICO = {'factors': [{'coeffs': [[0, 0], [0, 0], [0, 0], [1, 0]], 'a': [1, 0]}]}
SERIE_NAO_DIVISIVEL = {
    'z': {'valuation': 1, 'coeffs': [[1, 1, 0, 1]]},
    't': {'valuation': 2, 'coeffs': [[1, 1, 0, 1]]},
}


class ComandoTestCase(TestCase):

    def setUp(self):
        self._pasta = tempfile.TemporaryDirectory()
        self.pasta = Path(self._pasta.name)
        self.addCleanup(self._pasta.cleanup)

    def rodar(self, comando, *args, saida=None, **opcoes):
        stdout = StringIO()
        call_command(comando, *args, saida=str(saida or self.pasta), stdout=stdout, stderr=StringIO(), **opcoes)
        return stdout.getvalue()

    def ler_json(self, nome, pasta=None):
        return json.loads(((pasta or self.pasta) / nome).read_text(encoding='utf-8'))

    def gravar_json(self, nome, dado):
        caminho = self.pasta / nome
        caminho.write_text(json.dumps(dado), encoding='utf-8')
        return str(caminho)


class GreenComandoTests(ComandoTestCase):

    def test_ponto_distante(self):
        saida = self.rodar('green', '1e6', '0')
        self.assertIn('✅ g+ = 13.815', saida)
        valores = self.ler_json('green_valores.json')
        self.assertAlmostEqual(valores['g_plus']['value'], 13.815510557964274, places=6)
        self.assertEqual(valores['g_plus']['status'], 'Escaped')
        self.assertIn('bottcher_x', valores)

    def test_manifesto_lista_saidas(self):
        self.rodar('green', '1e6', '0')
        manifesto = self.ler_json('manifest_green.json')
        self.assertEqual(manifesto['command'], 'green')
        self.assertEqual([s['file'] for s in manifesto['outputs']], ['green_valores.json'])
        self.assertEqual(len(manifesto['config_sha256']), 64)
        self.assertIn('numpy', manifesto['versions'])

    def test_precedencia_da_configuracao(self):
        config = self.gravar_json('config.json', {'seed': 5, 'max_iter': 50, 'mode': 'PaperFaithful'})
        self.rodar('green', '1e6', '0', config=config, semente=7)
        gravada = self.ler_json('manifest_green.json')['config']
        self.assertEqual(gravada['seed'], 7)
        self.assertEqual(gravada['max_iter'], 50)
        self.assertEqual(gravada['mode'], 'PaperFaithful')

    def test_threads_invalido_nomeia_a_flag(self):
        with self.assertRaises(CommandError) as ctx:
            self.rodar('green', '1', '0', threads=0)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('--threads', str(ctx.exception))

    def test_argumento_invalido_sai_com_1(self):
        with self.assertRaises(CommandError) as ctx:
            self.rodar('green', 'abc', '0')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_mapa_inexistente(self):
        with self.assertRaises(CommandError) as ctx:
            self.rodar('green', '1', '0', mapa=str(self.pasta / 'nao_existe.json'))
        self.assertIn('--map', str(ctx.exception))

    def test_log_de_execucao(self):
        self.rodar('green', '1e6', '0')
        log = ExecucaoLog.objects.get(comando='green')
        self.assertEqual(log.status, 'SUCESSO')
        self.assertEqual(log.diretorio_saida, str(self.pasta))
        self.assertIsNotNone(log.duracao_segundos)


class RenderComandoTests(ComandoTestCase):

    def test_reprodutivel_byte_a_byte(self):
        outra = self.pasta / 'segunda'
        self.rodar('render', '0,2,0,2', '8')
        self.rodar('render', '0,2,0,2', '8', saida=outra)
        for nome in ('render_green.png', 'render_green.csv'):
            self.assertEqual((self.pasta / nome).read_bytes(), (outra / nome).read_bytes())

    def test_resolucao_invalida(self):
        with self.assertRaises(CommandError):
            self.rodar('render', '0,2,0,2', '0')


class FiltracaoComandoTests(ComandoTestCase):

    def test_sem_violacoes(self):
        saida = self.rodar('filtration_verify', '10000')
        self.assertIn('✅ violations = 0', saida)
        relatorio = self.ler_json('filtration_verify_relatorio.json')
        self.assertEqual(relatorio['violations'], 0)
        self.assertEqual(relatorio['constants']['mode'], 'Relaxed')

    def test_relatorio_reprodutivel(self):
        outra = self.pasta / 'segunda'
        self.rodar('filtration_verify', '2000', semente=3)
        self.rodar('filtration_verify', '2000', semente=3, saida=outra)
        nome = 'filtration_verify_relatorio.json'
        self.assertEqual((self.pasta / nome).read_bytes(), (outra / nome).read_bytes())

    def test_violacao_sai_com_2(self):
        relatorio = RelatorioFiltracao(
            violations=2,
            witnesses=[{'inclusao': 'f(V+) ⊆ V+', 'z': [1.0, 0.0], 'w': [0.0, 0.0]}],
            samples={'vplus': 10, 'vminus': 10, 'uplus': 0},
        )
        alvo = 'core.management.commands.filtration_verify.verify_filtration'
        with mock.patch(alvo, return_value=relatorio):
            with self.assertRaises(CommandError) as ctx:
                self.rodar('filtration_verify', '10')
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertEqual(ExecucaoLog.objects.get(comando='filtration_verify').status, 'VIOLACAO')
        # o manifesto é gravado mesmo quando o comando falha
        self.assertTrue((self.pasta / 'manifest_filtration_verify.json').exists())


class CertifyComandoTests(ComandoTestCase):

    def test_cubico_nao_divisivel(self):
        mapa = self.gravar_json('cubico.json', MAPA_CUBICO)
        serie = self.gravar_json('serie.json', SERIE_NAO_DIVISIVEL)
        saida = self.rodar('certify', serie, '2', mapa=mapa)
        self.assertIn('✅ verdict = NotDivisible no passo 0', saida)
        certificado = self.ler_json('certify_certificado.json')['certificate']
        self.assertEqual(certificado['verdict'], 'NotDivisible')
        self.assertEqual(certificado['step'], 0)

    def test_quadratico_imagem_nao_nula(self):
        serie = self.gravar_json('serie.json', {
            'z': {'valuation': 1, 'coeffs': [[1, 1, 0, 1]]},
            't': {'valuation': 2, 'coeffs': [[1, 1, 0, 1], [1, 1, 0, 1]]},
        })
        self.rodar('certify', serie, '2')
        certificado = self.ler_json('certify_certificado.json')['certificate']
        self.assertEqual(certificado['verdict'], 'NonvanishingImage')

    def test_serie_inexistente(self):
        with self.assertRaises(CommandError) as ctx:
            self.rodar('certify', str(self.pasta / 'nada.json'), '2')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertEqual(ExecucaoLog.objects.get(comando='certify').status, 'ERRO')


class ConstantesComandoTests(ComandoTestCase):

    def test_modo_fiel(self):
        self.rodar('constants', modo='PaperFaithful', w_points=2_000)
        dado = self.ler_json('constants_filtracao.json')
        self.assertEqual(dado['constants']['mode'], 'PaperFaithful')
        self.assertGreater(dado['min_large_c'], math.log(dado['constants']['R']))


class FolhaComandoTests(ComandoTestCase):

    def test_folha_automatica(self):
        saida = self.rodar('leaf', 'auto', 'auto', '8,4')
        self.assertIn('✅ 13 pontos traçados', saida)
        verificacoes = self.ler_json('leaf_verificacoes.json')
        self.assertLessEqual(verificacoes['level_defect'], 1e-6 * max(1, verificacoes['c']))
        self.assertLess(verificacoes['verticality_slope'], 1)
        self.assertEqual(verificacoes['constants']['c_g'], verificacoes['verticality_slope'])
        self.assertTrue((self.pasta / 'leaf_pontos.csv').exists())

    def test_nivel_negativo(self):
        with self.assertRaises(CommandError) as ctx:
            self.rodar('leaf', '-1', 'auto')
        self.assertEqual(ctx.exception.returncode, 1)


class BrodyComandoTests(ComandoTestCase):

    def test_sequencia_curta(self):
        saida = self.rodar('brody', 'auto', '1', '2', boundary=8, interior=4)
        relatorio = self.ler_json('brody_relatorio.json')
        self.assertEqual(relatorio['n_values'], [1, 2])
        self.assertEqual(relatorio['mode'], 'Relaxed')
        self.assertTrue(all(r >= 1 for r in relatorio['ratios']))
        self.assertLess(relatorio['log_base_norms'][0], relatorio['log_base_norms'][1])
        self.assertNotIn('começando em', saida)
        nomes = [s['file'] for s in self.ler_json('manifest_brody.json')['outputs']]
        self.assertEqual(nomes, ['brody_relatorio.json', 'brody_casos.csv'])
