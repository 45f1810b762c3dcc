"""
Comando para verificar empiricamente a filtração V+/V-/W

COMO USAR:
    python manage.py filtration_verify 10000
    python manage.py filtration_verify 10000 --mode PaperFaithful --seed 7

Este comando:
- Escolhe as constantes no modo configurado
- Amostra V+ e V- e testa f(V+) ⊆ V+ e f^-1(V-) ⊆ V- fator a fator
- Testa se pontos de U+ chegam a V+ dentro do orçamento
- Sai com código 2 se alguma inclusão falhar
"""

from core.filtracao import choose_constants, verify_filtration
from core.management.base import ComandoLaboratorio


class Command(ComandoLaboratorio):
    help = 'Verifica as inclusões da filtração com amostragem aleatória'
    nome = 'filtration_verify'

    def adicionar_argumentos(self, parser):
        parser.add_argument('n', type=int, help='Amostras por inclusão')

    def executar(self, config, sistema, gerador, **options):
        n = options['n']
        if n < 1:
            raise ValueError("n deve ser >= 1")
        with self.cronometro('constantes'):
            k = choose_constants(sistema, config.modo, config.semente)
        self.stdout.write(f'🔍 Verificando filtração ({k.mode.value}, R = {k.R:.6g}) com {n} amostras...')

        with self.cronometro('verificacao'):
            relatorio = verify_filtration(sistema, k, n, config.semente, config.max_iter)

        gerador.json('relatorio', {**relatorio.as_dict(), 'constants': k.as_dict()})

        for nome, total in relatorio.samples.items():
            self.stdout.write(f'📊 {nome}: {total} amostras')
        if relatorio.violations:
            for testemunha in relatorio.witnesses:
                self.stdout.write(self.style.ERROR(
                    f"❌ {testemunha['inclusao']}: z = {testemunha['z']}, w = {testemunha['w']}"
                ))
            relatorio.raise_if_violated()
        self.stdout.write(self.style.SUCCESS('✅ violations = 0'))
