"""
Erros de domínio do laboratório de Hénon.

Todos herdam de HenonError, então os comandos conseguem separar
"a conta matemática falhou" (BoundViolation / FiltrationViolation, código 2)
de "a ferramenta falhou" (qualquer outro HenonError, código 1).
"""


class HenonError(Exception):
    """Raiz de todos os erros do laboratório"""


class MapDefinitionError(HenonError, ValueError):
    """Documento de mapa inválido (p não mônico, a = 0, grau < 2, JSON mal formado)"""


class RangeOverflow(HenonError, OverflowError):
    """A órbita saiu da faixa de ponto flutuante; use o caminho ExtComplex"""


class IndeterminacyPoint(HenonError):
    """Extensão projetiva avaliada no ponto de indeterminação (I+ para f, I- para f^-1)"""

    def __init__(self, ponto, fator=None):
        self.ponto = ponto
        self.fator = fator
        super().__init__(f"Ponto de indeterminação atingido no fator {fator}: {ponto}")


class Degenerate(HenonError):
    """Coordenada nula tornou a recursão em escala logarítmica indefinida"""


class NonConvergent(HenonError):
    """Os termos de correção telescópica não decaíram"""


class BranchAmbiguity(HenonError):
    """Algum fator (1+u) tem |u| >= 1/2; o ponto não está fundo o bastante em V+"""

    def __init__(self, passo, modulo_u):
        self.passo = passo
        self.modulo_u = modulo_u
        super().__init__(f"|u| = {modulo_u:.3g} >= 1/2 no passo {passo}; itere f antes")


class NoBracket(HenonError):
    """O raio não cruza o nível c dentro dos limites de busca"""


class FiltrationViolation(HenonError):
    """Inclusão da filtração violada; carrega o ponto testemunha"""

    def __init__(self, testemunha, inclusao, total=1):
        self.testemunha = testemunha
        self.inclusao = inclusao
        self.total = total
        super().__init__(
            f"{total} violação(ões) de {inclusao}; testemunha: {testemunha}"
        )


class ProjectionDiverged(HenonError):
    """Newton não convergiu ao projetar o ponto deslocado de volta na folha"""


class DepthInsufficient(HenonError):
    """f^n(base) não está na zona profunda de V+"""


class TruncationExhausted(HenonError):
    """O resultado não teria nenhum coeficiente conhecido"""


class TruncationLoss(HenonError):
    """A truncagem de r não basta para o n pedido"""


class BoundViolation(HenonError):
    """Um limitante fechado de Fubini-Study falhou numa amostra"""

    def __init__(self, theta, i, n, medido, limitante, lema=''):
        self.theta = theta
        self.i = i
        self.n = n
        self.medido = medido
        self.limitante = limitante
        self.lema = lema
        super().__init__(
            f"{lema}: θ={theta}, i={i}, n={n}, medido={medido:.6g}, limitante={limitante:.6g}"
        )


class ConfiguracaoInvalida(HenonError, ValueError):
    """Configuração rejeitada; a mensagem começa pela flag responsável"""

    def __init__(self, flag, mensagem):
        self.flag = flag
        super().__init__(f"{flag}: {mensagem}")
