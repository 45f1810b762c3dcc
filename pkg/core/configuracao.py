"""
Montagem da configuração de uma execução.

Ordem de precedência (a última vence): settings -> JSON de --config -> flags.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings

from .exceptions import ConfiguracaoInvalida
from .filtracao import Modo
from .forms import RunConfigForm
from .green import GreenParams
from .henon import HenonSystem
from .relatorios import json_estavel, sha256_texto

logger = logging.getLogger(__name__)

# chave no JSON de --config -> campo do formulário
CHAVES_JSON = {
    'map': 'mapa',
    'mode': 'modo',
    'seed': 'semente',
    'threads': 'threads',
    'out': 'saida',
    'escape_radius': 'escape_radius',
    'max_iter': 'max_iter',
    'tol': 'tol',
}


@dataclass(frozen=True)
class RunConfig:
    mapa: str
    modo: Modo
    saida: Path
    semente: int
    threads: int
    escape_radius: float
    max_iter: int
    tol: float
    extras: dict = field(default_factory=dict)

    @classmethod
    def padrao(cls):
        return {
            'mapa': settings.HENON_MAPA,
            'modo': settings.HENON_MODO,
            'semente': settings.HENON_SEMENTE,
            'threads': settings.HENON_THREADS,
            'saida': settings.HENON_SAIDA,
            'escape_radius': settings.HENON_RAIO_ESCAPE,
            'max_iter': settings.HENON_MAX_ITER,
            'tol': settings.HENON_TOL,
        }

    @classmethod
    def montar(cls, arquivo=None, **flags):
        """flags usam os nomes do formulário; None significa 'não informado'"""
        valores = cls.padrao()
        extras = {}
        if arquivo:
            try:
                documento = json.loads(Path(arquivo).read_text(encoding='utf-8'))
            except (OSError, json.JSONDecodeError) as e:
                raise ConfiguracaoInvalida('--config', f"não foi possível ler {arquivo}: {e}") from e
            if not isinstance(documento, dict):
                raise ConfiguracaoInvalida('--config', "o documento deve ser um objeto JSON")
            for chave, valor in documento.items():
                if chave in CHAVES_JSON:
                    valores[CHAVES_JSON[chave]] = valor
                else:
                    extras[chave] = valor
        valores.update({k: v for k, v in flags.items() if v is not None})

        form = RunConfigForm(data=valores)
        if not form.is_valid():
            flag, mensagem = form.primeiro_erro()
            raise ConfiguracaoInvalida(flag, mensagem)
        dados = form.cleaned_data
        return cls(
            mapa=dados['mapa'],
            modo=Modo(dados['modo']),
            saida=Path(dados['saida']),
            semente=dados['semente'],
            threads=dados['threads'],
            escape_radius=dados['escape_radius'],
            max_iter=dados['max_iter'],
            tol=dados['tol'],
            extras=extras,
        )

    def extra(self, chave, padrao=None):
        return self.extras.get(chave, padrao)

    def sistema(self):
        if self.mapa:
            return HenonSystem.from_json(self.mapa)
        return HenonSystem.benchmark()

    def params(self):
        return GreenParams(self.escape_radius, self.max_iter, self.tol)

    def as_dict(self):
        return {
            'map': self.mapa,
            'mode': self.modo.value,
            'out': str(self.saida),
            'seed': self.semente,
            'threads': self.threads,
            'escape_radius': self.escape_radius,
            'max_iter': self.max_iter,
            'tol': self.tol,
            'extras': self.extras,
        }

    @property
    def sha256(self):
        return sha256_texto(json_estavel(self.as_dict()))
