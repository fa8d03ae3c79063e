from django.apps import AppConfig


class GaussAmpConfig(AppConfig):
    name = 'gaussamp'
    verbose_name = 'Gaussian amplitudes and Franck-Condon factors'
