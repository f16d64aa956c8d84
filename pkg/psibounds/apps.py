from django.apps import AppConfig


class PsiboundsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'psibounds'
    verbose_name = 'Explicit psi_K bounds'
