# Generated by Django 4.2.11 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="Run",
            fields=[
                (
                    "id",
                    models.AutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        help_text="Имя команды управления, например ruin_check",
                        max_length=32,
                        verbose_name="Команда",
                    ),
                ),
                (
                    "spec",
                    models.JSONField(
                        help_text="Нормализованное описание процесса",
                        verbose_name="Процесс",
                    ),
                ),
                (
                    "seed",
                    models.CharField(
                        blank=True,
                        help_text="64-битное зерно генератора, если оно использовалось",
                        max_length=20,
                        verbose_name="Зерно",
                    ),
                ),
                (
                    "result",
                    models.JSONField(
                        help_text="JSON, выведенный командой",
                        verbose_name="Результат",
                    ),
                ),
                (
                    "exit_code",
                    models.PositiveSmallIntegerField(
                        default=0, verbose_name="Код возврата"
                    ),
                ),
                (
                    "digest",
                    models.CharField(
                        db_index=True,
                        help_text="Хэш содержимого процесса и результата",
                        max_length=40,
                        verbose_name="Хэш",
                    ),
                ),
                (
                    "created",
                    models.DateTimeField(
                        auto_now_add=True, verbose_name="Дата запуска"
                    ),
                ),
            ],
            options={
                "verbose_name": "Запуск",
                "verbose_name_plural": "Запуски",
                "ordering": ("-created",),
            },
        ),
    ]
