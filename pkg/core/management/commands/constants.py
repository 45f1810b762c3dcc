"""
Comando para escolher as constantes da filtração V+/V-/W

COMO USAR:
    python manage.py constants
    python manage.py constants --mode PaperFaithful --map mapa.json

Mostra R, c_V+, c_φ, r_φ e o menor nível c "grande" aceito pelas folhas.
"""

from core.filtracao import choose_constants, min_large_c
from core.management.base import ComandoLaboratorio


class Command(ComandoLaboratorio):
    help = 'Escolhe as constantes da filtração e o menor nível c admissível'
    nome = 'constants'

    def adicionar_argumentos(self, parser):
        parser.add_argument('--w-points', type=int, default=10_000,
                            help='Pontos da grade de W usados em min_large_c')

    def executar(self, config, sistema, gerador, **options):
        with self.cronometro('constantes'):
            k = choose_constants(sistema, config.modo, config.semente)
        with self.cronometro('min_large_c'):
            c_min = min_large_c(sistema, k, options['w_points'], config.params())

        gerador.json('filtracao', {'system': sistema.as_dict(), 'constants': k.as_dict(), 'min_large_c': c_min})

        self.stdout.write(self.style.SUCCESS(f'✅ Constantes ({k.mode.value}):'))
        self.stdout.write(f'   R      = {k.R:.6g}')
        self.stdout.write(f'   c_V+   = {k.c_vplus:.6g}')
        self.stdout.write(f'   c_phi  = {k.c_phi:.6g}')
        self.stdout.write(f'   r_phi  = {k.r_phi:.6g}')
        self.stdout.write(f'📊 min_large_c = {c_min:.6g}')
