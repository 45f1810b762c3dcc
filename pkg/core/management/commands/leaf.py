"""
Comando para traçar um disco de folha no conjunto de nível {g+ = c}

COMO USAR:
    python manage.py leaf auto auto 64
    python manage.py leaf 5.0 4 64,32 --nesting --injectivity 32

Argumentos:
    c      nível (ou 'auto' para min_large_c)
    depth  profundidade n (ou 'auto')
    grid   pontos na borda[,pontos no interior]

Gera leaf_pontos.csv (theta_re, theta_im, z_re, z_im, w_re, w_im, g_plus, fs_norm)
e leaf_verificacoes.json com os defeitos de nível, confinamento e, se pedidos,
encaixe, injetividade e cobertura.
"""

import argparse

import mpmath

from core.filtracao import choose_constants, min_large_c
from core.forma_normal import (
    coverage_histogram,
    disco_alta_precisao,
    injectivity_gap,
    leaf_confinement_defect,
    level_defect,
    nesting_defect,
    theta_grid,
    trace_leaf,
    verticality_slope,
)
from core.green import green_plus_precise
from core.management.base import ComandoLaboratorio, inteiro_ou_auto, real_ou_auto
from core.metrica import disc_fs_profile


def grade(texto):
    try:
        partes = [int(v) for v in texto.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grade inválida: {texto!r}")
    if len(partes) == 1:
        partes.append(partes[0] // 2)
    if len(partes) != 2 or partes[0] < 1 or partes[1] < 0:
        raise argparse.ArgumentTypeError(f"grade deve ser BORDA ou BORDA,INTERIOR: {texto!r}")
    return tuple(partes)


class Command(ComandoLaboratorio):
    help = 'Traça um disco analítico de folha do nível {g+ = c}'
    nome = 'leaf'

    def adicionar_argumentos(self, parser):
        parser.add_argument('c', type=real_ou_auto, help="Nível c > 0 ou 'auto'")
        parser.add_argument('depth', type=inteiro_ou_auto, help="Profundidade n ou 'auto'")
        parser.add_argument('grid', type=grade, nargs='?', default=(64, 32), help='BORDA[,INTERIOR]')
        parser.add_argument('--nesting', action='store_true', help='Compara os discos de profundidade n e n+1')
        parser.add_argument('--injectivity', type=int, default=0, metavar='M',
                            help='Menor separação numa grade MxM do disco')
        parser.add_argument('--coverage', type=int, default=0, metavar='PONTOS',
                            help='Histograma de cobertura contra uma nuvem em L_c')

    def executar(self, config, sistema, gerador, **options):
        params = config.params()
        with self.cronometro('constantes'):
            k = choose_constants(sistema, config.modo, config.semente)
            c = options['c']
            if c is None:
                c = min_large_c(sistema, k, params=params)
                self.stdout.write(f'📊 c = min_large_c = {c:.6g}')
        if c <= 0:
            raise ValueError("c deve ser > 0")

        with self.cronometro('tracado'):
            folha = trace_leaf(sistema, k, c, depth=options['depth'], params=params)
        self.stdout.write(f'🔍 Folha em c = {c:.6g}, profundidade n = {folha.depth}')

        n_borda, n_interior = options['grid']
        thetas = theta_grid(n_borda, n_interior)
        params = params.for_constants(k)
        with self.cronometro('disco'):
            disco = disco_alta_precisao(sistema, k, folha, thetas)
            amostras = disc_fs_profile(sistema, k, folha, thetas, disco)
            linhas = []
            for amostra in amostras:
                g = green_plus_precise(sistema, amostra.point, disco.dps, params)
                with mpmath.workdps(disco.dps):
                    z, w = complex(amostra.point.z), complex(amostra.point.w)
                linhas.append({
                    'theta_re': amostra.theta.real, 'theta_im': amostra.theta.imag,
                    'z_re': z.real, 'z_im': z.imag, 'w_re': w.real, 'w_im': w.imag,
                    'g_plus': float(g), 'fs_norm': amostra.fs_norm,
                })
        gerador.csv('pontos', linhas, colunas=['theta_re', 'theta_im', 'z_re', 'z_im', 'w_re', 'w_im',
                                               'g_plus', 'fs_norm'])

        verificacoes = {
            'c': c,
            'depth': folha.depth,
            's_phase': folha.s_phase,
            'base': folha.base.as_tuple(),
            'constants': k.as_dict(),
        }
        with self.cronometro('verificacoes'):
            verificacoes['level_defect'] = level_defect(sistema, k, folha, thetas, params)
            log_mag, fase = leaf_confinement_defect(sistema, k, folha, thetas)
            verificacoes['confinement'] = {'log_mag': log_mag, 'phase': fase}
            verificacoes['verticality_slope'] = verticality_slope(sistema, k, folha, thetas)
            k = k.with_c_g(verificacoes['verticality_slope'])
            verificacoes['constants'] = k.as_dict()
            if options['nesting']:
                max_theta, defeito = nesting_defect(sistema, k, folha, thetas)
                verificacoes['nesting'] = {'max_theta': max_theta, 'defect': defeito}
            if options['injectivity']:
                verificacoes['injectivity_gap'] = injectivity_gap(sistema, k, folha, options['injectivity'])
            if options['coverage']:
                verificacoes['coverage'] = coverage_histogram(
                    sistema, k, folha, thetas, options['coverage'], config.semente, params=params
                )
        gerador.json('verificacoes', verificacoes)

        self.stdout.write(self.style.SUCCESS(f'✅ {len(linhas)} pontos traçados'))
        self.stdout.write(f"📊 max |g+ - c| = {verificacoes['level_defect']:.3g}")
        self.stdout.write(f"📊 confinamento: log|x| {log_mag:.3g}, fase {fase:.3g}")
        self.stdout.write(f"📊 inclinação vertical = {verificacoes['verticality_slope']:.6g}")
        if 'nesting' in verificacoes:
            self.stdout.write(f"📊 encaixe: |θ'| <= {verificacoes['nesting']['max_theta']:.4g}, "
                              f"defeito {verificacoes['nesting']['defect']:.3g}")
        if 'injectivity_gap' in verificacoes:
            self.stdout.write(f"📊 menor separação = {verificacoes['injectivity_gap']:.4g}")
        if 'coverage' in verificacoes:
            self.stdout.write(f"📊 cobertura: mediana {verificacoes['coverage']['mediana']:.4g}")
