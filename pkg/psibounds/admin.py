from django.contrib import admin
from .models import TableRun, VerificationRun


@admin.register(TableRun)
class TableRunAdmin(admin.ModelAdmin):
    list_display = ('table', 'rows_matched', 'rows_total', 'success', 'processing_time', 'workers', 'created_at')
    list_filter = ('table', 'success', 'created_at')
    search_fields = ('table', 'error_message')
    readonly_fields = ('created_at',)

    fieldsets = (
        ('Basic Information', {
            'fields': ('table', 'rows_total', 'rows_matched', 'success', 'created_at')
        }),
        ('Run Details', {
            'fields': ('processing_time', 'workers', 'payload', 'error_message'),
            'classes': ('collapse',)
        }),
    )


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = ('field_label', 'formula', 'x_max', 'max_ratio', 'passed', 'processing_time', 'created_at')
    list_filter = ('formula', 'passed', 'created_at')
    search_fields = ('field_label', 'formula')
    readonly_fields = ('created_at',)
