from django.apps import AppConfig


class SwitchingConfig(AppConfig):
    name = 'switching'
    verbose_name = 'Repeaterless network switching'
