"""
Общие фикстуры тестов
"""

import json

import numpy as np
import pytest

from config import settings


@pytest.fixture
def rng():
    """Детерминированный генератор numpy"""
    return np.random.default_rng(settings.DEFAULT_SEED)


@pytest.fixture
def write_json(tmp_path):
    """Запись JSON-файла во временный каталог; возвращает путь строкой"""

    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write
