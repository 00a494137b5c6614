from django.apps import AppConfig


class LevyConfig(AppConfig):
    name = "levy"
    verbose_name = "Lévy characteristics and region calculus"
