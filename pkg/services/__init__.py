"""
Сервисы Operator Lab
Вычислительные модули: матричное ядро, спектральная теория, GNS, коммутант,
CP-отображения, группы, неограниченные операторы, броуновское движение и вейвлеты
"""

from .matrix_core import Tolerance
from .spectral import SpectralData, spectral_decompose
from .gns import GnsTriple, State, StarAlgebra, gns_construct
from .commutant import CommutantReport, commutant
from .cpmaps import CPMap, StinespringDilation, stinespring
from .groups import FiniteGroup, InducedRep, Rep, induce
from .unbounded import GridOperator, deficiency, self_adjoint_extension
from .stochastic import KLBasis, kl_decompose
from .wavelet import HaarBasis, haar_basis, mt_matrix

__all__ = [
    'Tolerance',
    'SpectralData',
    'spectral_decompose',
    'GnsTriple',
    'State',
    'StarAlgebra',
    'gns_construct',
    'CommutantReport',
    'commutant',
    'CPMap',
    'StinespringDilation',
    'stinespring',
    'FiniteGroup',
    'InducedRep',
    'Rep',
    'induce',
    'GridOperator',
    'deficiency',
    'self_adjoint_extension',
    'KLBasis',
    'kl_decompose',
    'HaarBasis',
    'haar_basis',
    'mt_matrix',
]
