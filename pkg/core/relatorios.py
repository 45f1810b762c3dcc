"""
Escrita dos artefatos de cada comando (CSV, JSON, PNG) e do manifesto.

Os arquivos de saída não carregam tempos nem datas: só o manifesto tem
esse tipo de informação, para que duas execuções com a mesma
configuração e semente gerem CSV/JSON idênticos byte a byte.
"""

import hashlib
import json
import logging
import math
import platform
from importlib import metadata
from pathlib import Path

import numpy as np
import pandas as pd
from PIL import Image

logger = logging.getLogger(__name__)

PACOTES_VERSIONADOS = ('Django', 'numpy', 'scipy', 'mpmath', 'pandas', 'Pillow', 'python-decouple')
COR_K_PLUS = (0, 0, 128)
CINZA_MIN = 32


def sha256_arquivo(caminho):
    h = hashlib.sha256()
    with open(caminho, 'rb') as f:
        for bloco in iter(lambda: f.read(65536), b''):
            h.update(bloco)
    return h.hexdigest()


def sha256_texto(texto):
    return hashlib.sha256(texto.encode('utf-8')).hexdigest()


def serializavel(valor):
    """Converte complexos, mpmath, numpy, enums e não finitos para JSON estável"""
    if isinstance(valor, dict):
        return {str(k): serializavel(v) for k, v in valor.items()}
    if isinstance(valor, (list, tuple)):
        return [serializavel(v) for v in valor]
    if hasattr(valor, 'value') and hasattr(valor, 'name'):
        return valor.value
    if isinstance(valor, bool) or valor is None or isinstance(valor, (int, str)):
        return valor
    if isinstance(valor, np.generic):
        return serializavel(valor.item())
    if isinstance(valor, complex) or type(valor).__name__ == 'mpc':
        return [serializavel(float(valor.real)), serializavel(float(valor.imag))]
    try:
        numero = float(valor)
    except (TypeError, ValueError):
        return str(valor)
    if math.isfinite(numero):
        return numero
    return 'inf' if numero > 0 else ('-inf' if numero < 0 else 'nan')


def json_estavel(dado):
    return json.dumps(serializavel(dado), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def versoes_pacotes():
    versoes = {'python': platform.python_version()}
    for pacote in PACOTES_VERSIONADOS:
        try:
            versoes[pacote] = metadata.version(pacote)
        except metadata.PackageNotFoundError:
            versoes[pacote] = None
    return versoes


def imagem_green(valores):
    """Matriz de GreenValue -> imagem RGB; K+ em azul-marinho, escape em cinza por log1p(g)"""
    g = np.array([[v.value if v.escaped else np.nan for v in linha] for linha in valores], dtype=float)
    escapou = ~np.isnan(g)
    pixels = np.zeros(g.shape + (3,), dtype=np.uint8)
    pixels[~escapou] = COR_K_PLUS
    if escapou.any():
        escala = np.log1p(g[escapou])
        maximo = escala.max()
        normalizado = escala / maximo if maximo > 0 else np.zeros_like(escala)
        cinza = (CINZA_MIN + (255 - CINZA_MIN) * normalizado).round().astype(np.uint8)
        pixels[escapou] = np.stack([cinza] * 3, axis=-1)
    # linha 0 da grade é o menor y; a imagem cresce para baixo
    return Image.fromarray(np.ascontiguousarray(pixels[::-1]))


def _celula(valor):
    if isinstance(valor, complex) or type(valor).__name__ == 'mpc':
        return str(complex(valor))
    if hasattr(valor, 'value') and hasattr(valor, 'name'):
        return valor.value
    if isinstance(valor, np.generic):
        return valor.item()
    if type(valor).__name__ == 'mpf':
        return float(valor)
    return valor


class GeradorRelatorios:
    """Grava os artefatos de um comando e mantém a lista para o manifesto.

    Uso:
        gerador = GeradorRelatorios(Path('saida'), 'green')
        gerador.csv('valores', linhas)
        gerador.manifesto(config_dict, tempos)
    """

    def __init__(self, diretorio, comando):
        self.diretorio = Path(diretorio)
        self.comando = comando
        self.arquivos = []
        self.diretorio.mkdir(parents=True, exist_ok=True)

    def _caminho(self, nome, extensao):
        return self.diretorio / f"{self.comando}_{nome}.{extensao}"

    def _registrar(self, caminho):
        self.arquivos.append(caminho)
        logger.info(f"Artefato gravado: {caminho}")
        return caminho

    def csv(self, nome, linhas, colunas=None):
        df = pd.DataFrame([{k: _celula(v) for k, v in linha.items()} for linha in linhas], columns=colunas)
        caminho = self._caminho(nome, 'csv')
        df.to_csv(caminho, index=False, float_format='%.17g', lineterminator='\n')
        return self._registrar(caminho)

    def json(self, nome, dado):
        caminho = self._caminho(nome, 'json')
        caminho.write_text(json_estavel(dado), encoding='utf-8')
        return self._registrar(caminho)

    def png(self, nome, valores):
        caminho = self._caminho(nome, 'png')
        imagem_green(valores).save(caminho, format='PNG', optimize=False)
        return self._registrar(caminho)

    def manifesto(self, config, tempos):
        """manifest_<comando>.json com hash da configuração, versões, tempos e saídas"""
        texto_config = json_estavel(config)
        dado = {
            'command': self.comando,
            'config': serializavel(config),
            'config_sha256': sha256_texto(texto_config),
            'versions': versoes_pacotes(),
            'timings': tempos,
            'outputs': [
                {'file': caminho.name, 'sha256': sha256_arquivo(caminho)}
                for caminho in self.arquivos
            ],
        }
        caminho = self.diretorio / f"manifest_{self.comando}.json"
        caminho.write_text(json_estavel(dado), encoding='utf-8')
        logger.info(f"Manifesto gravado: {caminho}")
        return caminho
