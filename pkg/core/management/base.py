"""
Base comum dos comandos do laboratório.

Cada comando:
- monta a RunConfig (settings -> --config -> flags)
- registra a execução em ExecucaoLog quando o banco está disponível
- grava seus artefatos e o manifesto em --out
- sai com 0 (sucesso), 2 (limitante ou filtração violados) ou 1 (erro operacional)
"""

import argparse
import logging
import sys
import time
from contextlib import contextmanager

from django.core.management.base import BaseCommand, CommandError
from django.db import DatabaseError

from core.configuracao import RunConfig
from core.exceptions import BoundViolation, FiltrationViolation, HenonError
from core.filtracao import Modo
from core.models import ExecucaoLog
from core.relatorios import GeradorRelatorios

logger = logging.getLogger(__name__)


def complexo(texto):
    """'1e6', '1+2j', '-0.5j' -> complex"""
    try:
        return complex(texto.replace(' ', ''))
    except ValueError:
        raise argparse.ArgumentTypeError(f"número complexo inválido: {texto!r}")


def inteiro_ou_auto(texto):
    if texto == 'auto':
        return None
    try:
        return int(texto)
    except ValueError:
        raise argparse.ArgumentTypeError(f"esperado inteiro ou 'auto': {texto!r}")


def real_ou_auto(texto):
    if texto == 'auto':
        return None
    try:
        return float(texto)
    except ValueError:
        raise argparse.ArgumentTypeError(f"esperado número ou 'auto': {texto!r}")


class ComandoLaboratorio(BaseCommand):
    """Subclasses definem `nome` e implementam `executar`."""

    nome = ''

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def erro(mensagem):
            # argparse sairia com 2, código reservado para violações verificadas
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(1, f"{parser.prog}: error: {mensagem}\n")
            raise CommandError(f"Error: {mensagem}", returncode=1)

        parser.error = erro
        return parser

    def add_arguments(self, parser):
        parser.add_argument('--config', dest='arquivo_config', help='JSON com a configuração da execução')
        parser.add_argument('--map', dest='mapa', help='Documento JSON do mapa (padrão: z², a = 1)')
        parser.add_argument('--mode', dest='modo', choices=[m.value for m in Modo], help='Constantes da filtração')
        parser.add_argument('--seed', dest='semente', type=int, help='Semente de toda amostragem')
        parser.add_argument('--threads', type=int, help='Limite de threads')
        parser.add_argument('--out', dest='saida', help='Diretório de saída')
        parser.add_argument('--escape-radius', dest='escape_radius', type=float, help='Raio de escape')
        parser.add_argument('--max-iter', dest='max_iter', type=int, help='Iterações máximas')
        parser.add_argument('--tol', type=float, help='Tolerância da telescopagem')
        self.adicionar_argumentos(parser)

    def adicionar_argumentos(self, parser):
        pass

    def executar(self, config, sistema, gerador, **options):
        raise NotImplementedError

    # ------------------------------------------------------------------
    @contextmanager
    def cronometro(self, fase):
        inicio = time.perf_counter()
        try:
            yield
        finally:
            self.tempos[fase] = round(time.perf_counter() - inicio, 6)

    def _abrir_log(self, config):
        try:
            return ExecucaoLog.objects.create(
                comando=self.nome,
                modo=config.modo.value,
                semente=config.semente,
                config_sha256=config.sha256,
                diretorio_saida=str(config.saida),
            )
        except DatabaseError as e:
            logger.warning(f"Log de execução indisponível ({e}); rode 'migrate' para habilitar")
            return None

    def _fechar_log(self, log, status, duracao, erro=None):
        if log is None:
            return
        try:
            log.status = status
            log.duracao_segundos = duracao
            log.mensagem_erro = erro
            log.save(update_fields=['status', 'duracao_segundos', 'mensagem_erro'])
        except DatabaseError as e:
            logger.warning(f"Não foi possível atualizar o log de execução: {e}")

    def handle(self, *args, **options):
        try:
            config = RunConfig.montar(
                options.get('arquivo_config'),
                **{campo: options.get(campo) for campo in
                   ('mapa', 'modo', 'semente', 'threads', 'saida', 'escape_radius', 'max_iter', 'tol')},
            )
        except ValueError as e:
            raise CommandError(f"❌ {e}", returncode=1)

        self.tempos = {}
        log = self._abrir_log(config)
        gerador = GeradorRelatorios(config.saida, self.nome)
        inicio = time.perf_counter()
        status, mensagem = 'SUCESSO', None
        try:
            with self.cronometro('mapa'):
                sistema = config.sistema()
            with self.cronometro('total_comando'):
                self.executar(config, sistema, gerador, **options)
        except (BoundViolation, FiltrationViolation) as e:
            status, mensagem = 'VIOLACAO', str(e)
            raise CommandError(f"❌ Violação verificada: {e}", returncode=2)
        except (HenonError, OSError, ValueError, ZeroDivisionError) as e:
            status, mensagem = 'ERRO', str(e)
            logger.error(f"Comando {self.nome} abortado: {e}", exc_info=True)
            raise CommandError(f"❌ Erro: {e}", returncode=1)
        finally:
            duracao = round(time.perf_counter() - inicio, 6)
            self.tempos['total'] = duracao
            manifesto = gerador.manifesto(config.as_dict(), self.tempos)
            self._fechar_log(log, status, duracao, mensagem)
            self.stdout.write(f'📄 Manifesto: {manifesto}')
