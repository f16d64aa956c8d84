from django.db import models


class TableRun(models.Model):
    """Log of a reproduced table (crossover or c_max) and how it compared with the printed values"""

    TABLE_CHOICES = [
        ('crossover', 'Crossover'),
        ('crossover-best', 'Crossover, best of the two main bounds'),
        ('cmax', 'c_max scan'),
    ]

    table = models.CharField(max_length=20, choices=TABLE_CHOICES)
    rows_total = models.PositiveIntegerField(default=0)
    rows_matched = models.PositiveIntegerField(default=0)
    processing_time = models.FloatField(help_text="Wall time of the run in seconds")
    workers = models.PositiveIntegerField(default=1)
    payload = models.JSONField(default=dict, help_text="Rendered rows, as emitted with --format json")
    success = models.BooleanField(default=True, help_text="Whether every row matched the printed table")
    error_message = models.TextField(blank=True, null=True)
    created_at = models.DateTimeField(auto_now_add=True)

    @property
    def summary_line(self):
        return f"{self.rows_matched}/{self.rows_total} rows match"

    def __str__(self):
        status = "Match" if self.success else "Mismatch"
        return f"{status} - {self.table} ({self.created_at.strftime('%Y-%m-%d %H:%M')})"

    class Meta:
        verbose_name = "Table Run"
        verbose_name_plural = "Table Runs"
        ordering = ['-created_at']


class VerificationRun(models.Model):
    """Log of an empirical check of a bound against the exact psi_K"""
    field_label = models.CharField(max_length=64, help_text="Q or Q(sqrt(d))")
    disc = models.IntegerField(blank=True, null=True, help_text="Fundamental discriminant, empty for Q")
    formula = models.CharField(max_length=16)
    x_max = models.BigIntegerField()
    max_ratio = models.FloatField()
    argmax_x = models.FloatField()
    psi_at_argmax = models.FloatField()
    bound_at_argmax = models.FloatField()
    passed = models.BooleanField(default=True)
    processing_time = models.FloatField(help_text="Wall time of the run in seconds")
    created_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} - {self.field_label} {self.formula} up to {self.x_max}"

    class Meta:
        verbose_name = "Verification Run"
        verbose_name_plural = "Verification Runs"
        ordering = ['-created_at']
