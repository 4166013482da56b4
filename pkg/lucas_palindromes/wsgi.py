"""
WSGI entry point serving the verifier API (``/api/``) and its Swagger docs.

Long sweeps belong to ``manage.py verify_all``; the HTTP surface only runs the
desk preset synchronously.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lucas_palindromes.settings")

application = get_wsgi_application()
