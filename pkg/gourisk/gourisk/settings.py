import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


SECRET_KEY = os.environ.get(
    'GOU_SECRET_KEY', 'gourisk-local-only-key-not-used-for-serving'
)

DEBUG = False

ALLOWED_HOSTS = []


INSTALLED_APPS = [
    'core',
    'levy',
    'classification',
    'simulator',
    'estimation',
]

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


SCHEMAS_DIR = os.path.join(BASE_DIR, 'schemas')


def _threads_from_env():
    value = os.environ.get('GOU_THREADS')
    if not value:
        return os.cpu_count() or 1
    return max(1, int(value))


GOU = {
    'BOUNDARY_TOL': 1e-12,
    'DRIFT_TOL': 1e-9,
    'QUAD_TOL': 1e-9,
    'QUAD_LIMIT': 200,
    'DIVERGENCE_LEVELS': 8,
    'THETA_SEARCH_CAP': 1e6,
    'DRIFT_SCAN_POINTS': 41,
    'THREADS': _threads_from_env(),
    'MIN_RUIN_EVENTS': 30,
    'CONFIDENCE': 0.95,
    'DEFAULT_STEP': 1e-2,
    'DEFAULT_HORIZON': 10.0,
    'DEFAULT_PATHS': 1000,
    'BATCH_SIZE': 256,
    'TAIL_EPS': 0.05,
    'OUTPUT_DIR': os.path.join(BASE_DIR, 'paths'),
}


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        name: {
            'handlers': ['console'],
            'level': os.environ.get('GOU_LOG_LEVEL', 'INFO'),
            'propagate': False,
        }
        for name in (
            'core', 'levy', 'classification', 'simulator', 'estimation'
        )
    },
}
