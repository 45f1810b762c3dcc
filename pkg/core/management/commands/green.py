"""
Comando para calcular g+ e g- de um ponto

COMO USAR:
    python manage.py green 1e6 0
    python manage.py green 0.3+0.1j 2 --map mapa.json --precise 60

Este comando:
- Calcula g+(z, w) e g-(z, w) com o orçamento de iterações configurado
- Classifica o ponto em K+/U+ e K-/U-
- Calcula a coordenada de Böttcher x quando o ponto está fundo em V+
"""

from core.exceptions import BranchAmbiguity
from core.green import bottcher_x, classify, green_minus, green_plus, green_plus_precise
from core.henon import AffinePoint
from core.management.base import ComandoLaboratorio, complexo


def _valor(g):
    return {'value': g.value, 'iterations': g.iterations, 'status': g.status.value, 'refined': g.refined}


class Command(ComandoLaboratorio):
    help = 'Calcula as funções de Green g+ e g- em um ponto (z, w)'
    nome = 'green'

    def adicionar_argumentos(self, parser):
        parser.add_argument('z', type=complexo, help='Coordenada z')
        parser.add_argument('w', type=complexo, help='Coordenada w')
        parser.add_argument(
            '--precise',
            type=int,
            default=None,
            metavar='DPS',
            help='Reavalia g+ em mpmath com DPS dígitos',
        )

    def executar(self, config, sistema, gerador, **options):
        ponto = AffinePoint(options['z'], options['w'])
        params = config.params()
        self.stdout.write(f'🔍 {sistema} em ({ponto.z}, {ponto.w})')

        with self.cronometro('green'):
            plus = green_plus(sistema, ponto, params)
            minus = green_minus(sistema, ponto, params)
            classe = classify(sistema, ponto, params)

        resultado = {
            'point': ponto.as_tuple(),
            'g_plus': _valor(plus),
            'g_minus': _valor(minus),
            'classification': {'plus': classe.plus.value, 'minus': classe.minus.value,
                               'budget_limited': classe.budget_limited},
        }

        if plus.escaped:
            try:
                x = bottcher_x(sistema, ponto, params)
                resultado['bottcher_x'] = {'log_mag': x.log_mag, 'phase': x.phase}
            except BranchAmbiguity as e:
                self.stdout.write(self.style.WARNING(f'⚠️  Böttcher indisponível: {e}'))

        if options['precise']:
            with self.cronometro('green_precise'):
                preciso = green_plus_precise(sistema, ponto, options['precise'], params)
            resultado['g_plus_precise'] = str(preciso)

        gerador.json('valores', resultado)

        if plus.escaped:
            self.stdout.write(self.style.SUCCESS(f'✅ g+ = {plus.value:.10g} ({plus.iterations} iterações)'))
        else:
            self.stdout.write(self.style.WARNING(
                f'⚠️  g+ = 0 dentro do orçamento ({plus.iterations} iterações): ponto em K+'
            ))
        if minus.escaped:
            self.stdout.write(self.style.SUCCESS(f'✅ g- = {minus.value:.10g} ({minus.iterations} iterações)'))
        else:
            self.stdout.write(self.style.WARNING(f'⚠️  g- = 0 dentro do orçamento: ponto em K-'))
        self.stdout.write(f'📊 Classificação: {classe.plus.value} × {classe.minus.value}')
        if 'bottcher_x' in resultado:
            x = resultado['bottcher_x']
            self.stdout.write(f'📊 Böttcher: |x| = e^({x["log_mag"]:.10g}), arg x = {x["phase"]:.10g}')
        if "g_plus_precise" in resultado:
            self.stdout.write(f'📊 g+ (mpmath): {resultado["g_plus_precise"]}')
