from django.apps import AppConfig


class SieveConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'sieve'
    verbose_name = 'Simple closed curve sieve'
