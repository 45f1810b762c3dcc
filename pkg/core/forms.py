from pathlib import Path

from django import forms

from .filtracao import Modo


# campo do formulário -> flag da linha de comando
FLAGS = {
    'mapa': '--map',
    'modo': '--mode',
    'semente': '--seed',
    'threads': '--threads',
    'saida': '--out',
    'escape_radius': '--escape-radius',
    'max_iter': '--max-iter',
    'tol': '--tol',
}


class RunConfigForm(forms.Form):
    mapa = forms.CharField(required=False, label="Documento do mapa (JSON)")
    modo = forms.ChoiceField(choices=[(m.value, m.value) for m in Modo], label="Modo das constantes")
    semente = forms.IntegerField(min_value=0, label="Semente")
    threads = forms.IntegerField(min_value=1, label="Threads")
    saida = forms.CharField(label="Diretório de saída")
    escape_radius = forms.FloatField(min_value=2.0, label="Raio de escape")
    max_iter = forms.IntegerField(min_value=1, label="Iterações máximas")
    tol = forms.FloatField(label="Tolerância")

    def clean_mapa(self):
        mapa = self.cleaned_data.get('mapa', '')
        if mapa and not Path(mapa).is_file():
            raise forms.ValidationError(f"arquivo não encontrado: {mapa}")
        return mapa

    def clean_tol(self):
        tol = self.cleaned_data['tol']
        if not 0 < tol < 1:
            raise forms.ValidationError("deve estar em (0, 1)")
        return tol

    def primeiro_erro(self):
        """(flag, mensagem) do primeiro campo inválido"""
        for campo, erros in self.errors.items():
            return FLAGS.get(campo, campo), '; '.join(erros)
        return None, None
