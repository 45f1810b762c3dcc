"""
Django settings for henonlab project.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# O projeto não serve nada pela rede; a chave só existe porque o Django exige
SECRET_KEY = config('SECRET_KEY', default='henonlab-local-nao-secreta')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'core',
]


# Database
# sqlite por padrão; postgresql quando DB_ENGINE=postgresql

DB_ENGINE = config('DB_ENGINE', default='sqlite3')

if DB_ENGINE == 'postgresql':
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.postgresql',
            'NAME': config('DB_NAME', default='henonlab'),
            'USER': config('DB_USER', default='postgres'),
            'PASSWORD': config('DB_PASSWORD', default=''),
            'HOST': config('DB_HOST', default='localhost'),
            'PORT': config('DB_PORT', default='5432'),
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': config('DB_NAME', default=str(BASE_DIR / 'henonlab.sqlite3')),
        }
    }


# Internationalization

LANGUAGE_CODE = 'pt-br'

TIME_ZONE = 'America/Sao_Paulo'

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging

HENON_LOG_LEVEL = config('HENON_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'core': {
            'handlers': ['console'],
            'level': HENON_LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Laboratório

HENON_MAPA = config('HENON_MAPA', default='')  # vazio = p(z) = z², a = 1
HENON_MODO = config('HENON_MODO', default='Relaxed')
HENON_SEMENTE = config('HENON_SEMENTE', default=0, cast=int)
HENON_THREADS = config('HENON_THREADS', default=1, cast=int)
HENON_SAIDA = config('HENON_SAIDA', default=str(BASE_DIR / 'saida'))
HENON_RAIO_ESCAPE = config('HENON_RAIO_ESCAPE', default=1e8, cast=float)
HENON_MAX_ITER = config('HENON_MAX_ITER', default=400, cast=int)
HENON_TOL = config('HENON_TOL', default=1e-10, cast=float)
