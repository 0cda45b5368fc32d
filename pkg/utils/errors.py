"""
Исключения Operator Lab
Каждая ошибка предметной области имеет собственный класс
"""


class ToolkitError(Exception):
    """Базовая ошибка всех вычислительных модулей"""


class InputValidationError(ToolkitError):
    """Некорректные входные данные (JSON, параметры командной строки)"""


# Матричное ядро
class NonSquareError(ToolkitError):
    """Матрица не квадратная"""


class DimMismatchError(ToolkitError):
    """Несогласованные размерности"""


class DependentInputError(ToolkitError):
    """Векторы линейно зависимы относительно заданного скалярного произведения"""


class NotProjectionError(ToolkitError):
    """Матрица не является ортогональным проектором"""


# Спектральная теория
class NotHermitianError(ToolkitError):
    """Матрица не самосопряжена"""


class BadLevelError(ToolkitError):
    """Недопустимый уровень ступенчатой аппроксимации"""


# GNS
class InvalidAlgebraError(ToolkitError):
    """Базис не задает унитальную *-алгебру"""


class NotAStateError(ToolkitError):
    """Функционал не является состоянием"""


class NotDominatedError(ToolkitError):
    """Неравенство t <= s нарушено"""


# Вполне положительные отображения
class NotCPError(ToolkitError):
    """Отображение не вполне положительно"""


class NotUnitalError(ToolkitError):
    """Отображение не сохраняет единицу"""


class NotSameMapError(ToolkitError):
    """Дилатации реализуют разные отображения"""


class NotMinimalError(ToolkitError):
    """Дилатация не минимальна"""


# Группы
class InvalidGroupError(ToolkitError):
    """Таблица умножения не задает группу"""


class NotAnActionError(ToolkitError):
    """Отображение не является действием автоморфизмами"""


class GroupMismatchError(ToolkitError):
    """Элементы принадлежат разным группам"""


class OffCircleError(ToolkitError):
    """Точка не лежит на единичной окружности"""


class NotSubgroupError(ToolkitError):
    """Подмножество не является подгруппой"""


class SupportOutOfDomainError(ToolkitError):
    """Носитель пробной функции выходит за область квадратуры"""


# Неограниченные операторы
class GridTooSmallError(ToolkitError):
    """Слишком мелкая сетка"""


class OutsideDomainError(ToolkitError):
    """Вектор не лежит в минимальной области определения"""


class IndexMismatchError(ToolkitError):
    """Индексы дефекта не равны"""


class StencilError(ToolkitError):
    """Оператор внутри сетки не задан однородным разностным шаблоном"""


# Броуновское движение
class BadModeCountError(ToolkitError):
    """Число мод превышает размер сетки"""
