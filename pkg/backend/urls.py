"""
URL configuration for the gaussamp project.

The compute endpoints live under api/; see gaussamp/urls.py.
"""
from django.urls import include, path

urlpatterns = [
    path('api/', include('gaussamp.urls')),
]
