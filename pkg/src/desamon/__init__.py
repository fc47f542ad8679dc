"""desamon: monitoring for staged rural-infrastructure programs.

Tracks budgeted village-level activities through three fund tranches and
weekly field reports (physical %, financial absorption, labor, photos),
and aggregates plan-vs-realization figures for oversight.
"""

__version__ = "0.1.0"
