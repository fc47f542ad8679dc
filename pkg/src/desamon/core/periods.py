"""Reporting-week arithmetic.

Weekly reports are indexed 1-based within a fiscal year.  Week 1 opens on
the first Monday of the year; every later week starts 7 days after the
previous one.  The few January days that can precede the first Monday fold
into week 1 so the index stays 1-based and total over the year.
"""

from __future__ import annotations

from datetime import date, timedelta

from desamon.errors import DateOutOfRange


def first_reporting_monday(fiscal_year: int) -> date:
    """First Monday on or after 1 January of the fiscal year."""
    jan1 = date(fiscal_year, 1, 1)
    return jan1 + timedelta(days=(7 - jan1.weekday()) % 7)


def period_of(day: date, fiscal_year: int) -> int:
    """Reporting week index of a calendar date within the fiscal year."""
    if day.year != fiscal_year:
        raise DateOutOfRange(f"{day.isoformat()} is outside fiscal year {fiscal_year}")
    anchor = first_reporting_monday(fiscal_year)
    if day < anchor:
        return 1
    return (day - anchor).days // 7 + 1


def period_start_date(fiscal_year: int, period: int) -> date:
    """First day of a reporting week (1 January for the folded week 1 stub)."""
    if period < 1:
        raise DateOutOfRange(f"period must be >= 1, got {period}")
    anchor = first_reporting_monday(fiscal_year)
    if period == 1:
        return min(anchor, date(fiscal_year, 1, 1))
    return anchor + timedelta(days=(period - 1) * 7)


def period_end_date(fiscal_year: int, period: int) -> date:
    """Last day (Sunday) of a reporting week."""
    if period < 1:
        raise DateOutOfRange(f"period must be >= 1, got {period}")
    anchor = first_reporting_monday(fiscal_year)
    return anchor + timedelta(days=period * 7 - 1)


def last_period_of_year(fiscal_year: int) -> int:
    """Index of the reporting week containing 31 December."""
    return period_of(date(fiscal_year, 12, 31), fiscal_year)
