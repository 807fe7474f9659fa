"""
Численный инструментарий для уравнений Янга–Бакстера.

Вершинные, спиновые, IRF и шахматные формулировки весов, операторные формы,
трансфер-матрицы, а также преобразования звезда–треугольник для
электрических цепей и гауссовой модели.
"""

# Версия пакета
__version__ = '1.0.0'
