# Generated by Django 5.2.6 on 2026-10-17 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='PipelineRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=32)),
                ('seed', models.PositiveBigIntegerField(default=0)),
                ('out_dir', models.CharField(max_length=1024)),
                ('config', models.JSONField(default=dict)),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('success', 'Success'), ('failed', 'Failed')], default='pending', max_length=16)),
                ('input_digest', models.CharField(blank=True, default='', max_length=64)),
                ('stage', models.CharField(blank=True, default='', max_length=32)),
                ('error', models.TextField(blank=True, default='')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
        ),
        migrations.CreateModel(
            name='TrainingRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('variant', models.CharField(max_length=16)),
                ('seed', models.PositiveBigIntegerField(default=0)),
                ('metric', models.CharField(default='mae', max_length=16)),
                ('test_value', models.FloatField(blank=True, null=True)),
                ('train_report', models.JSONField(blank=True, null=True)),
                ('checkpoint_path', models.CharField(blank=True, default='', max_length=1024)),
                ('wall_time', models.FloatField(default=0.0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='training_runs', to='api.pipelinerun')),
            ],
            options={
                'ordering': ['id'],
            },
        ),
    ]
