import hashlib
import json

from django.db import models


def canonical_json(doc):
    return json.dumps(doc, sort_keys=True, ensure_ascii=False,
                      separators=(',', ':'))


def content_digest(data):
    """Git blob hash of ``data`` (bytes or a JSON document)."""
    if not isinstance(data, bytes):
        data = canonical_json(data).encode('utf-8')
    header = f'blob {len(data)}\0'.encode('ascii')
    return hashlib.sha1(header + data).hexdigest()


class Run(models.Model):
    command = models.CharField(
        max_length=32,
        verbose_name='Команда',
        help_text='Имя команды управления, например ruin_check'
    )
    spec = models.JSONField(
        verbose_name='Процесс',
        help_text='Нормализованное описание процесса'
    )
    seed = models.CharField(
        max_length=20,
        blank=True,
        verbose_name='Зерно',
        help_text='64-битное зерно генератора, если оно использовалось'
    )
    result = models.JSONField(
        verbose_name='Результат',
        help_text='JSON, выведенный командой'
    )
    exit_code = models.PositiveSmallIntegerField(
        default=0,
        verbose_name='Код возврата'
    )
    digest = models.CharField(
        max_length=40,
        db_index=True,
        verbose_name='Хэш',
        help_text='Хэш содержимого процесса и результата'
    )
    created = models.DateTimeField('Дата запуска', auto_now_add=True)

    class Meta:
        ordering = ('-created',)
        verbose_name = 'Запуск'
        verbose_name_plural = 'Запуски'

    def __str__(self):
        return f'{self.command} {self.digest[:12]}'

    @classmethod
    def record(cls, command, spec, result, exit_code=0, seed=None):
        return cls.objects.create(
            command=command,
            spec=spec,
            seed='' if seed is None else str(seed),
            result=result,
            exit_code=exit_code,
            digest=content_digest({'spec': spec, 'result': result}),
        )
