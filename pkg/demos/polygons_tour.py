"""
Newton and Hodge polygons
=========================
"""

from fractions import Fraction

from periodlab import hodge_polygon, newton_polygon_from_charpoly, polygon_compare, polygon_from_slopes

# Frobenius b*sigma with b = [[0, 3], [1, 0]] over Q_3 is simple of slope 1/2.
newton = newton_polygon_from_charpoly([[0, 3], [1, 0]], 3)
print(newton.slopes())

# A filtration of type (1, 0) has the same endpoint, and lies below.
hodge = hodge_polygon([(1, 1), (0, 1)])
print([(str(x), str(y)) for x, y in hodge.vertices])
print(polygon_compare(newton, hodge))

# Slopes are sorted before summing, so the order of the input does not matter.
print(polygon_from_slopes([Fraction(1), Fraction(-1), Fraction(-1)]) == polygon_from_slopes([-1, 1, -1]))
