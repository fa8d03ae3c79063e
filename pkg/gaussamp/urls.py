"""
URL configuration for the gaussamp app.
"""
from django.urls import path

from . import views

urlpatterns = [
    path('health/', views.health, name='health'),
    path('lhaf/', views.lhaf, name='lhaf'),
    path('haf/', views.haf, name='haf'),
    path('permanent/', views.permanent, name='permanent'),
    path('amplitude/', views.amplitude, name='amplitude'),
    path('fcf/', views.fcf, name='fcf'),
    path('spectrum/', views.spectrum, name='spectrum'),
]
