"""
Comando para certificar que não há curva holomorfa por I+ no subnível

COMO USAR:
    python manage.py certify serie.json 4
    python manage.py certify serie.json 3 --map cubico.json

O JSON de entrada tem a forma:
    {"z": {"valuation": 1, "coeffs": [[1,1,0,1]]},
     "t": {"valuation": 4, "coeffs": [[1,1,0,1], [1,2,0,1]]}}
com cada coeficiente como [num_re, den_re, num_im, den_im].
"""

from core.management.base import ComandoLaboratorio
from core.series import Veredito, certify_no_curve, ler_entrada


class Command(ComandoLaboratorio):
    help = 'Certifica a inexistência de curvas por I+ via ordens de séries de Laurent'
    nome = 'certify'

    def adicionar_argumentos(self, parser):
        parser.add_argument('series', help='JSON com as séries z(θ) e t(θ)')
        parser.add_argument('N', type=int, help='Ordem de anulamento de t')

    def executar(self, config, sistema, gerador, **options):
        z, t, N = ler_entrada(options['series'], options['N'])
        self.stdout.write(f'🔍 Empurrando o germe por {sistema} (N = {N}, truncagem {min(z.trunc_order, t.trunc_order)})')

        with self.cronometro('certificacao'):
            certificado = certify_no_curve(sistema, z, t, N)

        gerador.json('certificado', {
            'N': N,
            'z': z.as_dict(),
            't': t.as_dict(),
            'certificate': certificado.as_dict(),
        })

        if certificado.verdict == Veredito.INCONCLUSIVE:
            self.stdout.write(self.style.WARNING(
                f'⚠️  Inconclusive no passo {certificado.step}: truncagem esgotada'
            ))
        else:
            self.stdout.write(self.style.SUCCESS(
                f'✅ verdict = {certificado.verdict.value} no passo {certificado.step}'
            ))
