"""
Comando para renderizar g+ numa fatia real de C²

COMO USAR:
    python manage.py render -- -2,2,-2,2 256x256 re_z,im_z
    python manage.py render --threads 4 -- -3,3,-3,3 128 re_z,re_w:im_z=0,im_w=0

Janelas com mínimo negativo vão depois de "--" para o argparse não lê-las como flag.

Gera:
- render_green.png (K+ em azul-marinho, escape em tons de cinza)
- render_green.csv (x_index, y_index, g_plus, status)
"""

import argparse

from core.green import Fatia, render_grid
from core.management.base import ComandoLaboratorio


def janela(texto):
    try:
        valores = [float(v) for v in texto.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"janela inválida: {texto!r}")
    if len(valores) != 4 or valores[0] >= valores[1] or valores[2] >= valores[3]:
        raise argparse.ArgumentTypeError(f"janela deve ser xmin,xmax,ymin,ymax crescentes: {texto!r}")
    return tuple(valores)


def resolucao(texto):
    try:
        partes = [int(v) for v in texto.lower().split('x')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolução inválida: {texto!r}")
    if len(partes) == 1:
        partes = partes * 2
    if len(partes) != 2 or min(partes) < 1:
        raise argparse.ArgumentTypeError(f"resolução deve ser N ou NxM com N, M >= 1: {texto!r}")
    return tuple(partes)


def fatia(texto):
    try:
        return Fatia.parse(texto)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


class Command(ComandoLaboratorio):
    help = 'Renderiza g+ numa grade de uma fatia real bidimensional'
    nome = 'render'

    def adicionar_argumentos(self, parser):
        parser.add_argument('window', type=janela, help='xmin,xmax,ymin,ymax')
        parser.add_argument('res', type=resolucao, help='N ou NxM')
        parser.add_argument('slice', type=fatia, nargs='?', default=Fatia(),
                            help="eixos e valores fixos, ex.: 're_z,re_w:im_z=0,im_w=0'")

    def executar(self, config, sistema, gerador, **options):
        nx, ny = options['res']
        self.stdout.write(f'🔍 Renderizando {nx}x{ny} com {config.threads} thread(s)...')
        with self.cronometro('render'):
            valores = render_grid(sistema, options['window'], (nx, ny), options['slice'],
                                  config.params(), config.threads)

        linhas = []
        for j, linha in enumerate(valores):
            for i, g in enumerate(linha):
                linhas.append({'x_index': i, 'y_index': j, 'g_plus': g.value, 'status': g.status.value})
        gerador.png('green', valores)
        gerador.csv('green', linhas, colunas=['x_index', 'y_index', 'g_plus', 'status'])

        escapados = sum(1 for l in linhas if l['status'] == 'Escaped')
        self.stdout.write(self.style.SUCCESS(
            f'✅ {len(linhas)} pixels: {escapados} escaparam, {len(linhas) - escapados} em K+ dentro do orçamento'
        ))
