import pytest

from newsgrid.dates import ParsedDate, contains_date, dates_match, parse_date


@pytest.mark.parametrize(
    "raw,lang,expected",
    [
        ("2022-03-05", None, (2022, 3, 5, None, None, None, None)),
        ("2022-03-05T10:00", None, (2022, 3, 5, 10, 0, None, None)),
        ("2022-03-05T10:00:30Z", None, (2022, 3, 5, 10, 0, 30, 0)),
        ("2022-03-05 10:00:30+03:00", None, (2022, 3, 5, 10, 0, 30, 180)),
        ("March 5, 2022 10:00 AM", "en", (2022, 3, 5, 10, 0, None, None)),
        ("March 5th, 2022", "en", (2022, 3, 5, None, None, None, None)),
        ("5 March 2022", "en", (2022, 3, 5, None, None, None, None)),
        ("Tuesday, March 5, 2022", "en", (2022, 3, 5, None, None, None, None)),
        ("3/5/2022", "en", (2022, 3, 5, None, None, None, None)),
        ("05.03.2022", "de", (2022, 3, 5, None, None, None, None)),
        ("5. März 2022, 14:30 Uhr", "de", (2022, 3, 5, 14, 30, None, None)),
        ("5 марта 2022 г.", "ru", (2022, 3, 5, None, None, None, None)),
        ("5 марта 2022 года в 14:00", "ru", (2022, 3, 5, 14, 0, None, None)),
        ("2022年3月5日", "zh", (2022, 3, 5, None, None, None, None)),
        ("2022年3月5日 下午2:30", "zh", (2022, 3, 5, 14, 30, None, None)),
        ("2022년 3월 5일", "ko", (2022, 3, 5, None, None, None, None)),
        ("5 يناير 2022", "ar", (2022, 1, 5, None, None, None, None)),
        ("٥ يناير ٢٠٢٢", "ar", (2022, 1, 5, None, None, None, None)),
        ("2022/03/05", None, (2022, 3, 5, None, None, None, None)),
        ("25.12.2022", None, (2022, 12, 25, None, None, None, None)),
        ("12/25/2022", None, (2022, 12, 25, None, None, None, None)),
    ],
)
def test_parse_table(raw, lang, expected):
    p = parse_date(raw, lang)
    assert p is not None, raw
    assert (p.year, p.month, p.day, p.hour, p.minute, p.second, p.tz_minutes) == expected


@pytest.mark.parametrize(
    "raw",
    ["yesterday", "not a date", "", "2022-13-05", "32.01.2022", "March 2022",
     "10:30", "soon", "завтра"],
)
def test_parse_failures(raw):
    assert parse_date(raw) is None


def test_worked_equivalence():
    a = parse_date("2022-03-05T10:00")
    b = parse_date("March 5, 2022 10:00 AM", "en")
    assert dates_match(a, b)


def test_date_granularity_match():
    assert dates_match(parse_date("2022-03-05"), parse_date("2022-03-05T10:00"))
    assert not dates_match(parse_date("2022-03-06"), parse_date("2022-03-05T10:00"))


def test_time_granularity_mismatch():
    assert not dates_match(parse_date("2022-03-05T10:00"), parse_date("2022-03-05T11:00"))
    assert dates_match(parse_date("2022-03-05T10:00"), parse_date("2022-03-05T10:00:45"))
    assert not dates_match(
        parse_date("2022-03-05T10:00:30"), parse_date("2022-03-05T10:00:45")
    )


def test_zone_aware_match():
    a = parse_date("2022-03-05T13:00+03:00")
    b = parse_date("2022-03-05T10:00Z")
    assert dates_match(a, b)
    c = parse_date("2022-03-05T10:00+03:00")
    assert not dates_match(a, c)


def test_relative_forms_unsupported():
    assert not dates_match(parse_date("yesterday"), parse_date("2022-03-05"))


def test_pm_rollover():
    p = parse_date("March 5, 2022 12:15 PM", "en")
    assert (p.hour, p.minute) == (12, 15)
    q = parse_date("March 5, 2022 12:15 AM", "en")
    assert q.hour == 0


def test_contains_date_scan():
    assert contains_date("posted 2024-01-02 by staff")
    assert contains_date("am 5. März 2022 erschienen")
    assert not contains_date("no numbers here")


def test_parsed_date_is_hashable_value():
    assert parse_date("2022-03-05") == ParsedDate(2022, 3, 5)
