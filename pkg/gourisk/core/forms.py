from django import forms

CONTINUOUS_EXAMPLE = 'continuous_example'
JUMP_EXAMPLE = 'jump_example'
PRESET_CHOICES = (
    (CONTINUOUS_EXAMPLE, 'Непрерывный пример'),
    (JUMP_EXAMPLE, 'Пример со скачками'),
)
PRESET_DEFAULTS = {
    CONTINUOUS_EXAMPLE: {'c': 0.0},
    JUMP_EXAMPLE: {'c': 1.0, 'lambda': 1.0},
}


class PresetForm(forms.Form):
    """One of the two worked examples.

    The JSON key ``lambda`` is bound to the field ``lam``.
    """

    preset = forms.ChoiceField(
        choices=PRESET_CHOICES,
        label='Пример',
        help_text='Имя готового примера',
    )
    c = forms.FloatField(
        required=False,
        label='Снос',
        help_text='Параметр c примера',
    )
    lam = forms.FloatField(
        required=False,
        label='Интенсивность',
        help_text='Интенсивность пуассоновского процесса',
    )

    def clean(self):
        cleaned_data = super().clean()
        preset = cleaned_data.get('preset')
        if preset is None:
            return cleaned_data
        defaults = PRESET_DEFAULTS[preset]
        if cleaned_data.get('c') is None:
            cleaned_data['c'] = defaults['c']
        if preset == JUMP_EXAMPLE:
            if cleaned_data.get('lam') is None:
                cleaned_data['lam'] = defaults['lambda']
            if cleaned_data['c'] <= 0:
                self.add_error('c', 'Снос должен быть положительным')
            if cleaned_data['lam'] <= 0:
                self.add_error('lam', 'Интенсивность должна быть положительной')
        elif self.data.get('lam') not in (None, ''):
            self.add_error('lam', 'У непрерывного примера нет интенсивности')
        return cleaned_data


class RunParametersForm(forms.Form):
    """Simulation parameters shared by ruin_simulate and ruin_estimate."""

    z = forms.FloatField(
        required=False,
        label='Начальный капитал',
        help_text='Стартовое значение V_0 = z',
    )
    horizon = forms.FloatField(
        required=False,
        min_value=0.0,
        label='Горизонт',
        help_text='Длина моделируемого отрезка времени',
    )
    step = forms.FloatField(
        required=False,
        min_value=0.0,
        label='Шаг',
        help_text='Шаг сетки Эйлера',
    )
    paths = forms.IntegerField(
        required=False,
        min_value=1,
        label='Число траекторий',
    )
    seed = forms.IntegerField(
        required=False,
        min_value=0,
        max_value=2 ** 64 - 1,
        label='Зерно',
        help_text='Зерно генератора, 64-битное беззнаковое',
    )
    eps = forms.FloatField(
        required=False,
        label='Усечение',
        help_text='Скачки короче eps не моделируются',
    )

    def clean_eps(self):
        eps = self.cleaned_data['eps']
        if eps is not None and eps <= 0:
            raise forms.ValidationError('Порог усечения должен быть положительным')
        return eps

    def clean_horizon(self):
        horizon = self.cleaned_data['horizon']
        if horizon is not None and horizon == 0:
            raise forms.ValidationError('Горизонт должен быть положительным')
        return horizon

    def clean_step(self):
        step = self.cleaned_data['step']
        if step is not None and step == 0:
            raise forms.ValidationError('Шаг должен быть положительным')
        return step
