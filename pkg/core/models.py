from django.db import models


class ExecucaoLog(models.Model):
    """Registro de cada execução de comando do laboratório"""
    STATUS_CHOICES = [
        ('PROCESSANDO', 'Processando'),
        ('SUCESSO', 'Sucesso'),
        ('VIOLACAO', 'Violação verificada'),
        ('ERRO', 'Erro'),
    ]

    MODO_CHOICES = [
        ('PaperFaithful', 'Constantes fiéis'),
        ('Relaxed', 'Constantes relaxadas'),
    ]

    comando = models.CharField(max_length=50, verbose_name="Comando")
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='PROCESSANDO', verbose_name="Status")
    modo = models.CharField(max_length=20, choices=MODO_CHOICES, default='Relaxed', verbose_name="Modo")
    semente = models.BigIntegerField(default=0, verbose_name="Semente")
    config_sha256 = models.CharField(max_length=64, blank=True, verbose_name="Hash da Configuração")
    diretorio_saida = models.CharField(max_length=500, blank=True, verbose_name="Diretório de Saída")
    mensagem_erro = models.TextField(blank=True, null=True, verbose_name="Mensagem de Erro")
    duracao_segundos = models.FloatField(null=True, blank=True, verbose_name="Duração (s)")
    criado_em = models.DateTimeField(auto_now_add=True, verbose_name="Criado em")

    class Meta:
        verbose_name = "Log de Execução"
        verbose_name_plural = "Logs de Execução"
        ordering = ['-criado_em']

    def __str__(self):
        return f"{self.comando} - {self.status} - {self.criado_em.strftime('%d/%m/%Y %H:%M')}"
