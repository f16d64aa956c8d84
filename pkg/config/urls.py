"""
URL configuration for the psibounds project.

Only the admin is served; it browses the recorded table and verification runs.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
