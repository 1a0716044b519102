"""
Django settings for the qnet switching project.

The project has no web surface and no database: Django provides the settings
layer, the management-command CLI and the app registry for Celery task
discovery. Every tunable is read from the environment through environs.
"""

from pathlib import Path

from environs import Env

env = Env()
env.read_env(recurse=False)

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = env.str('DJANGO_SECRET_KEY', 'qnet-switching-local-only')

DEBUG = env.bool('DJANGO_DEBUG', False)

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'switching',
]

DATABASES = {}

USE_TZ = True
TIME_ZONE = 'UTC'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Logging
QNET_LOG = env.str('QNET_LOG', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'switching': {
            'handlers': ['stderr'],
            'level': QNET_LOG,
            'propagate': False,
        },
    },
}

# Celery
CELERY_BROKER_URL = env.str('CELERY_BROKER_URL', 'redis://localhost:6379/0')
CELERY_RESULT_BACKEND = env.str('CELERY_RESULT_BACKEND', CELERY_BROKER_URL)
CELERY_TASK_TRACK_STARTED = True
# Bench instances are solved in-process unless a worker pool is configured.
CELERY_TASK_ALWAYS_EAGER = env.bool('CELERY_TASK_ALWAYS_EAGER', True)
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'

# Solver
QNET_PATH_CAP = env.int('QNET_PATH_CAP', 1_000_000)
QNET_MAX_ITERATIONS = env.int('QNET_MAX_ITERATIONS', 100_000)
QNET_PRICING_BUDGET = env.int('QNET_PRICING_BUDGET', 10_000_000)
QNET_TOLERANCE = env.float('QNET_TOLERANCE', 1e-7)
QNET_PIVOT_TOLERANCE = env.float('QNET_PIVOT_TOLERANCE', 1e-9)
QNET_STALL_THRESHOLD = env.int('QNET_STALL_THRESHOLD', 50)
