# Generated by Django 4.2 on 2026-10-19 10:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExecucaoLog',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('comando', models.CharField(max_length=50, verbose_name='Comando')),
                ('status', models.CharField(choices=[('PROCESSANDO', 'Processando'), ('SUCESSO', 'Sucesso'), ('VIOLACAO', 'Violação verificada'), ('ERRO', 'Erro')], default='PROCESSANDO', max_length=20, verbose_name='Status')),
                ('modo', models.CharField(choices=[('PaperFaithful', 'Constantes fiéis'), ('Relaxed', 'Constantes relaxadas')], default='Relaxed', max_length=20, verbose_name='Modo')),
                ('semente', models.BigIntegerField(default=0, verbose_name='Semente')),
                ('config_sha256', models.CharField(blank=True, max_length=64, verbose_name='Hash da Configuração')),
                ('diretorio_saida', models.CharField(blank=True, max_length=500, verbose_name='Diretório de Saída')),
                ('mensagem_erro', models.TextField(blank=True, null=True, verbose_name='Mensagem de Erro')),
                ('duracao_segundos', models.FloatField(blank=True, null=True, verbose_name='Duração (s)')),
                ('criado_em', models.DateTimeField(auto_now_add=True, verbose_name='Criado em')),
            ],
            options={
                'verbose_name': 'Log de Execução',
                'verbose_name_plural': 'Logs de Execução',
                'ordering': ['-criado_em'],
            },
        ),
    ]
