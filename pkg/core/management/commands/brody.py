"""
Comando para medir a sequência de Brody de uma folha

COMO USAR:
    python manage.py brody auto 1 6
    python manage.py brody 5.0 2 5 --mode PaperFaithful --boundary 32 --interior 16
    python manage.py brody auto 1 4 --calibrate

Para cada n em [nmin, nmax] mede ‖φ_{s,n}‖_FS na origem e o supremo no
disco, separa cada passo f^-1 nos casos i/ii/iii e confronta as razões
com os limitantes fechados (afirmados só com constantes PaperFaithful).

Gera brody_relatorio.json e brody_casos.csv (n, i, case, theta, ratio, bound, pass);
com --calibrate também brody_curvas.csv com o perfil de curvas inteiras conhecidas.
"""

from core.filtracao import choose_constants, min_large_c
from core.forma_normal import theta_grid, trace_leaf
from core.management.base import ComandoLaboratorio, real_ou_auto
from core.metrica import (
    brody_ratio_sequence,
    curva_exp_potencia,
    curva_exp_quadratica,
    curva_polinomial,
    curve_fs_profile,
)

RAIOS_CALIBRACAO = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)


class Command(ComandoLaboratorio):
    help = 'Mede normas de Fubini-Study ao longo dos discos de uma folha'
    nome = 'brody'

    def adicionar_argumentos(self, parser):
        parser.add_argument('c', type=real_ou_auto, help="Nível c > 0 ou 'auto'")
        parser.add_argument('nmin', type=int, help='Menor profundidade')
        parser.add_argument('nmax', type=int, help='Maior profundidade')
        parser.add_argument('--boundary', type=int, default=64, help='Pontos de θ na borda')
        parser.add_argument('--interior', type=int, default=32, help='Pontos de θ no interior')
        parser.add_argument('--calibrate', action='store_true',
                            help='Perfil FS de curvas inteiras de referência')

    def executar(self, config, sistema, gerador, **options):
        nmin, nmax = options['nmin'], options['nmax']
        if not 1 <= nmin <= nmax:
            raise ValueError("precisa 1 <= nmin <= nmax")
        params = config.params()
        with self.cronometro('constantes'):
            k = choose_constants(sistema, config.modo, config.semente)
            c = options['c']
            if c is None:
                c = min_large_c(sistema, k, params=params)
        self.stdout.write(f'🔍 Brody em c = {c:.6g}, n = {nmin}..{nmax} ({k.mode.value})')

        with self.cronometro('tracado'):
            folha = trace_leaf(sistema, k, c, params=params)
        thetas = theta_grid(options['boundary'], options['interior'])
        with self.cronometro('brody'):
            relatorio = brody_ratio_sequence(sistema, k, folha, range(nmin, nmax + 1), thetas)

        linhas = [
            {chave: linha[chave] for chave in ('n', 'i', 'case', 'theta', 'ratio', 'bound', 'pass', 'subcase')}
            for caso in relatorio.case_bound_checks for linha in caso.linhas
        ]
        gerador.json('relatorio', {'c': c, 'constants': k.as_dict(), **relatorio.as_dict()})
        gerador.csv('casos', linhas, colunas=['n', 'i', 'case', 'theta', 'ratio', 'bound', 'pass', 'subcase'])

        if options['calibrate']:
            with self.cronometro('calibracao'):
                curvas = {
                    'polinomial': curva_polinomial(sistema.factors[0]),
                    'exp_z3': curva_exp_potencia(3),
                    'exp_quadratica': curva_exp_quadratica(),
                }
                perfis = {nome: curve_fs_profile(curva, RAIOS_CALIBRACAO) for nome, curva in curvas.items()}
            gerador.csv('curvas', [
                {'raio': r, **{nome: perfil[j] for nome, perfil in perfis.items()}}
                for j, r in enumerate(RAIOS_CALIBRACAO)
            ])

        self.stdout.write(self.style.SUCCESS(f'✅ c_g medido = {relatorio.c_g:.6g}'))
        for n, log_base, razao in zip(relatorio.n_values, relatorio.log_base_norms, relatorio.ratios):
            self.stdout.write(f'📊 n={n}: log ‖φ‖_FS,0 = {log_base:.6g}, sup/base = {razao:.6g}')
        self.stdout.write(f'📊 M_s ≈ {relatorio.M_s_hat:.6g}')
        if relatorio.C_s_hat is not None:
            self.stdout.write(f'📊 C_s ≈ {relatorio.C_s_hat:.6g}')
        if relatorio.C_sVplus_hat is not None:
            self.stdout.write(f'📊 C_s,V+ ≈ {relatorio.C_sVplus_hat:.6g}')
        if not relatorio.base_norms_crescentes:
            self.stdout.write(self.style.WARNING('⚠️  normas na origem não são estritamente crescentes'))
        falhas = sum(caso.falhas_sanduiche for caso in relatorio.case_bound_checks)
        if falhas:
            self.stdout.write(self.style.WARNING(f'⚠️  {falhas} amostra(s) fora do sanduíche FS (informativo)'))
        if not any(caso.assertivo for caso in relatorio.case_bound_checks):
            self.stdout.write(self.style.WARNING(
                '⚠️  limitantes fechados registrados sem afirmação (constantes relaxadas ou composição)'
            ))
