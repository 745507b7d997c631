"""Small multilingual date parser and comparison rules.

Handles ISO-8601 plus an explicit pattern table for the six corpus
languages (en, de, ru, zh, ko, ar): numeric forms, month-name forms and
CJK date markers. Relative expressions ("yesterday") and year inference
are deliberately unsupported; parse failure returns None.
"""
from __future__ import annotations

import datetime as _dt
import re
from dataclasses import dataclass

__all__ = ["ParsedDate", "parse_date", "dates_match", "looks_like_date", "contains_date"]


@dataclass(frozen=True)
class ParsedDate:
    """Normalized (date, optional time, optional zone offset) triple."""

    year: int
    month: int
    day: int
    hour: int | None = None
    minute: int | None = None
    second: int | None = None
    tz_minutes: int | None = None

    @property
    def has_time(self) -> bool:
        return self.hour is not None


_MONTHS: dict[str, int] = {}


def _add_months(names: list[str], start: int = 1) -> None:
    for i, name in enumerate(names, start=start):
        _MONTHS[name] = i


_add_months(["january", "february", "march", "april", "may", "june", "july",
             "august", "september", "october", "november", "december"])
_add_months(["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep",
             "oct", "nov", "dec"])
_MONTHS["sept"] = 9
_add_months(["januar", "februar", "märz", "april", "mai", "juni", "juli",
             "august", "september", "oktober", "november", "dezember"])
_add_months(["jän", "feb", "mär", "apr", "mai", "jun", "jul", "aug", "sep",
             "okt", "nov", "dez"])
_add_months(["января", "февраля", "марта", "апреля", "мая", "июня", "июля",
             "августа", "сентября", "октября", "ноября", "декабря"])
_add_months(["январь", "февраль", "март", "апрель", "май", "июнь", "июль",
             "август", "сентябрь", "октябрь", "ноябрь", "декабрь"])
_add_months(["янв", "фев", "мар", "апр", "май", "июн", "июл", "авг", "сен",
             "окт", "ноя", "дек"])
_add_months(["يناير", "فبراير", "مارس", "أبريل", "مايو", "يونيو", "يوليو",
             "أغسطس", "سبتمبر", "أكتوبر", "نوفمبر", "ديسمبر"])
_add_months(["كانون الثاني", "شباط", "آذار", "نيسان", "أيار", "حزيران",
             "تموز", "آب", "أيلول", "تشرين الأول", "تشرين الثاني",
             "كانون الأول"])

_MONTH_ALT = "|".join(sorted(map(re.escape, _MONTHS), key=len, reverse=True))

_WEEKDAYS = [
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
    "mon", "tue", "wed", "thu", "fri", "sat", "sun",
    "montag", "dienstag", "mittwoch", "donnerstag", "freitag", "samstag", "sonntag",
    "понедельник", "вторник", "среда", "четверг", "пятница", "суббота", "воскресенье",
]
_WEEKDAY_RE = re.compile(
    r"^(?:%s)\s*,?\s+" % "|".join(sorted(_WEEKDAYS, key=len, reverse=True)), re.I
)

_TIME = (
    r"(?:[T,]?\s*(?:at\s+|в\s+|um\s+)?"
    r"(?P<h>\d{1,2}):(?P<min>\d{2})(?::(?P<s>\d{2})(?:\.\d+)?)?"
    r"(?:\s*(?P<ampm>[ap])\.?m\.?)?"
    r"(?:\s*(?P<tz>Z|UTC|GMT|[+-]\d{2}:?\d{2}))?"
    r"\s*(?:uhr)?)?"
)

_YMD = re.compile(
    r"(?P<y>\d{4})(?P<sep>[-/.])(?P<m>\d{1,2})(?P=sep)(?P<d>\d{1,2})" + _TIME + r"$",
    re.I,
)
_DMY = re.compile(
    r"(?P<d>\d{1,2})(?P<sep>[./-])(?P<m>\d{1,2})(?P=sep)(?P<y>\d{4})" + _TIME + r"$",
    re.I,
)
_MONTH_FIRST = re.compile(
    rf"(?P<mon>{_MONTH_ALT})\.?\s+(?P<d>\d{{1,2}})(?:st|nd|rd|th)?\s*,?\s+(?P<y>\d{{4}})"
    + _TIME + r"$",
    re.I,
)
_DAY_FIRST = re.compile(
    rf"(?P<d>\d{{1,2}})(?:st|nd|rd|th)?\.?\s*(?P<mon>{_MONTH_ALT})\.?,?\s+(?P<y>\d{{4}})"
    r"(?:\s*(?:года|г\.|г))?" + _TIME + r"$",
    re.I,
)
_CJK = re.compile(
    r"(?P<y>\d{4})\s*[年년]\s*(?P<m>\d{1,2})\s*[月월]\s*(?P<d>\d{1,2})\s*[日일号號]?"
    r"(?:\s*(?P<half>上午|下午|오전|오후))?"
    r"(?:\s*(?P<h>\d{1,2})[:時时시](?P<min>\d{1,2})分?분?(?::(?P<s>\d{2}))?)?\s*$"
)

_ARABIC_DIGITS = str.maketrans("٠١٢٣٤٥٦٧٨٩", "0123456789")

# Quick scan used as a classifier feature, not as a parse.
_DATE_HINT_RE = re.compile(
    rf"\d{{4}}\s*[-/.年년]\s*\d{{1,2}}|\d{{1,2}}[./]\d{{1,2}}[./]\d{{4}}"
    rf"|(?:{_MONTH_ALT})\.?\s+\d{{1,2}}|\d{{1,2}}\.?\s*(?:{_MONTH_ALT})",
    re.I,
)


def _tz_to_minutes(tz: str | None) -> int | None:
    if tz is None:
        return None
    if tz.upper() in ("Z", "UTC", "GMT"):
        return 0
    sign = 1 if tz[0] == "+" else -1
    digits = tz[1:].replace(":", "")
    return sign * (int(digits[:2]) * 60 + int(digits[2:4]))


def _build(y: int, m: int, d: int, groups: dict) -> ParsedDate | None:
    try:
        _dt.date(y, m, d)
    except ValueError:
        return None
    hour = minute = second = None
    if groups.get("h") is not None:
        hour = int(groups["h"])
        minute = int(groups["min"])
        second = int(groups["s"]) if groups.get("s") else None
        ampm = (groups.get("ampm") or "").lower()
        half = groups.get("half") or ""
        if ampm == "p" or half in ("下午", "오후"):
            if hour < 12:
                hour += 12
        elif (ampm == "a" or half in ("上午", "오전")) and hour == 12:
            hour = 0
        if hour > 23 or minute > 59 or (second is not None and second > 59):
            return None
    return ParsedDate(
        year=y, month=m, day=d, hour=hour, minute=minute, second=second,
        tz_minutes=_tz_to_minutes(groups.get("tz")),
    )


def parse_date(s: str, language: str | None = None) -> ParsedDate | None:
    """Parse a date string; None when nothing in the pattern table matches."""
    if not s:
        return None
    s = re.sub(r"\s+", " ", s.translate(_ARABIC_DIGITS)).strip().strip("‏‎")
    s = _WEEKDAY_RE.sub("", s)
    if not s:
        return None

    m = _CJK.match(s)
    if m:
        g = m.groupdict()
        if g["h"] is not None and g["min"] is None:
            g["min"] = "0"
        return _build(int(g["y"]), int(g["m"]), int(g["d"]), g)
    m = _YMD.match(s)
    if m:
        g = m.groupdict()
        return _build(int(g["y"]), int(g["m"]), int(g["d"]), g)
    for pattern in (_MONTH_FIRST, _DAY_FIRST):
        m = pattern.match(s)
        if m:
            g = m.groupdict()
            month = _MONTHS.get(g["mon"].lower())
            if month is None:
                continue
            return _build(int(g["y"]), month, int(g["d"]), g)
    m = _DMY.match(s)
    if m:
        g = m.groupdict()
        a, b = int(g["d"]), int(g["m"])
        day, month = (b, a) if (language or "").startswith("en") else (a, b)
        if month > 12 and day <= 12:
            day, month = month, day
        return _build(int(g["y"]), month, day, g)
    return None


def dates_match(a: ParsedDate | None, b: ParsedDate | None) -> bool:
    """Equality at the finest granularity present in both values.

    With zones and times on both sides the comparison is instant-based;
    otherwise components are compared naively.
    """
    if a is None or b is None:
        return False
    both_seconds = a.second is not None and b.second is not None
    if a.has_time and b.has_time and a.tz_minutes is not None and b.tz_minutes is not None:
        ua = _as_utc(a)
        ub = _as_utc(b)
        if not both_seconds:
            ua = ua.replace(second=0)
            ub = ub.replace(second=0)
        return ua == ub
    if (a.year, a.month, a.day) != (b.year, b.month, b.day):
        return False
    if a.has_time and b.has_time:
        if (a.hour, a.minute) != (b.hour, b.minute):
            return False
        if both_seconds and a.second != b.second:
            return False
    return True


def _as_utc(p: ParsedDate) -> _dt.datetime:
    return _dt.datetime(
        p.year, p.month, p.day, p.hour or 0, p.minute or 0, p.second or 0
    ) - _dt.timedelta(minutes=p.tz_minutes or 0)


def looks_like_date(s: str, language: str | None = None) -> bool:
    return parse_date(s, language) is not None


def contains_date(s: str) -> bool:
    """Cheap scan for date-like fragments (used as a model feature)."""
    return bool(_DATE_HINT_RE.search(s))
