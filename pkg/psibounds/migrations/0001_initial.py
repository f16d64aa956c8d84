# Generated by Django 5.2.5 on 2026-10-17 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='TableRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('table', models.CharField(choices=[('crossover', 'Crossover'), ('crossover-best', 'Crossover, best of the two main bounds'), ('cmax', 'c_max scan')], max_length=20)),
                ('rows_total', models.PositiveIntegerField(default=0)),
                ('rows_matched', models.PositiveIntegerField(default=0)),
                ('processing_time', models.FloatField(help_text='Wall time of the run in seconds')),
                ('workers', models.PositiveIntegerField(default=1)),
                ('payload', models.JSONField(default=dict, help_text='Rendered rows, as emitted with --format json')),
                ('success', models.BooleanField(default=True, help_text='Whether every row matched the printed table')),
                ('error_message', models.TextField(blank=True, null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Table Run',
                'verbose_name_plural': 'Table Runs',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('field_label', models.CharField(help_text='Q or Q(sqrt(d))', max_length=64)),
                ('disc', models.IntegerField(blank=True, help_text='Fundamental discriminant, empty for Q', null=True)),
                ('formula', models.CharField(max_length=16)),
                ('x_max', models.BigIntegerField()),
                ('max_ratio', models.FloatField()),
                ('argmax_x', models.FloatField()),
                ('psi_at_argmax', models.FloatField()),
                ('bound_at_argmax', models.FloatField()),
                ('passed', models.BooleanField(default=True)),
                ('processing_time', models.FloatField(help_text='Wall time of the run in seconds')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Verification Run',
                'verbose_name_plural': 'Verification Runs',
                'ordering': ['-created_at'],
            },
        ),
    ]
