"""
Инициализация и регистрация всех подкоманд
"""

from . import brownian, commutant, cp, extension, gns, group, spectral, wavelet


def register_handlers(subparsers) -> None:
    """
    Регистрация всех подкоманд в парсере

    Args:
        subparsers: Результат ArgumentParser.add_subparsers
    """
    # Порядок регистрации определяет порядок в --help
    spectral.register(subparsers)
    gns.register(subparsers)
    commutant.register(subparsers)
    cp.register(subparsers)
    group.register(subparsers)
    extension.register(subparsers)
    brownian.register(subparsers)
    wavelet.register(subparsers)
