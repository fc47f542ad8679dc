"""Reporting-week arithmetic, including the folded week-1 stub."""

from datetime import date, timedelta

import pytest
from hypothesis import given
from hypothesis import strategies as st

from desamon.core.periods import (
    first_reporting_monday,
    last_period_of_year,
    period_end_date,
    period_of,
    period_start_date,
)
from desamon.errors import DateOutOfRange


def days_of_year(year):
    start = date(year, 1, 1).toordinal()
    end = date(year, 12, 31).toordinal()
    return st.integers(start, end).map(date.fromordinal)


class TestAnchors:
    @pytest.mark.parametrize("year,monday", [
        (2014, date(2014, 1, 6)),   # 1 Jan is a Wednesday
        (2018, date(2018, 1, 1)),   # 1 Jan is already a Monday
        (2017, date(2017, 1, 2)),   # 1 Jan is a Sunday
    ])
    def test_first_monday(self, year, monday):
        assert first_reporting_monday(year) == monday
        assert monday.weekday() == 0

    def test_stub_days_fold_into_week_one(self):
        for day in range(1, 6):
            assert period_of(date(2014, 1, day), 2014) == 1
        assert period_of(date(2014, 1, 6), 2014) == 1
        assert period_of(date(2014, 1, 12), 2014) == 1
        assert period_of(date(2014, 1, 13), 2014) == 2

    def test_week_boundaries_2014(self):
        assert period_start_date(2014, 1) == date(2014, 1, 1)
        assert period_end_date(2014, 1) == date(2014, 1, 12)
        assert period_start_date(2014, 2) == date(2014, 1, 13)
        assert period_end_date(2014, 2) == date(2014, 1, 19)

    def test_last_period(self):
        assert last_period_of_year(2014) == 52
        # 2018 starts on a Monday, so 31 Dec lands in week 53.
        assert last_period_of_year(2018) == 53

    def test_wrong_year_rejected(self):
        with pytest.raises(DateOutOfRange):
            period_of(date(2015, 1, 1), 2014)

    @pytest.mark.parametrize("period", [0, -3])
    def test_bad_period_rejected(self, period):
        with pytest.raises(DateOutOfRange):
            period_start_date(2014, period)
        with pytest.raises(DateOutOfRange):
            period_end_date(2014, period)


class TestProperties:
    @given(st.integers(2000, 2030).flatmap(lambda y: st.tuples(st.just(y), days_of_year(y))))
    def test_date_lies_inside_its_period(self, year_day):
        year, day = year_day
        period = period_of(day, year)
        assert period >= 1
        assert period_start_date(year, period) <= day <= period_end_date(year, period)

    @given(st.integers(2000, 2030).flatmap(lambda y: st.tuples(st.just(y), days_of_year(y))))
    def test_period_monotone_in_date(self, year_day):
        year, day = year_day
        if day == date(year, 12, 31):
            return
        assert period_of(day, year) <= period_of(day + timedelta(days=1), year)

    @given(st.integers(2000, 2030), st.integers(2, 55))
    def test_later_weeks_are_exactly_seven_days(self, year, period):
        start, end = period_start_date(year, period), period_end_date(year, period)
        assert (end - start).days == 6
        assert start.weekday() == 0 and end.weekday() == 6

    @given(st.integers(2000, 2030))
    def test_every_day_of_year_is_covered_once(self, year):
        last = last_period_of_year(year)
        day = date(year, 1, 1)
        seen = []
        while day.year == year:
            seen.append(period_of(day, year))
            day += timedelta(days=1)
        assert seen == sorted(seen)
        assert seen[0] == 1 and seen[-1] == last
        assert set(seen) == set(range(1, last + 1))
