"""
URL configuration for hemon_backend project.

Read-only JSON endpoints live under ``/api/``; see ``api.urls``.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),
    path('api/', include('api.urls')),
]
