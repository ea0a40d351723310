#!/usr/bin/env python3
"""Regenerates the synthetic CSV fixtures and the health-aggregates golden results.

The fixture values are closed-form functions of (country, day index). The
expected aggregate rows are computed here with Python's decimal module,
independently of the Rust query engine, and written as golden files.

Usage: python3 scripts/gen_fixtures.py
"""
import datetime as dt
import json
import os
from decimal import Decimal

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "crates", "core", "assets", "fixtures")
GOLDEN = os.path.join(ROOT, "crates", "core", "tests", "golden")

XSD = "http://www.w3.org/2001/XMLSchema#"
COUNTRY_NS = "http://qurator-csi.de/data/covid/country/"

COUNTRIES = [("DEU", "Germany"), ("JOR", "Jordan"), ("SWE", "Sweden")]
START = dt.date(2020, 4, 1)

# (column, flagged)
INDICATOR_COLUMNS = [
    ("C1_School closing", True),
    ("C2_Workplace closing", True),
    ("C3_Cancel public events", True),
    ("C4_Restrictions on gatherings", True),
    ("C5_Close public transport", True),
    ("C6_Stay at home requirements", True),
    ("C7_Restrictions on internal movement", True),
    ("C8_International travel controls", False),
    ("E1_Income support", True),
    ("E2_Debt/contract relief", False),
    ("E3_Fiscal measures", False),
    ("E4_International support", False),
    ("H1_Public information campaigns", True),
    ("H2_Testing policy", False),
    ("H3_Contact tracing", False),
    ("H4_Emergency investment in healthcare", False),
    ("H5_Investment in vaccines", False),
    ("H6_Facial Coverings", True),
    ("M1_Wildcard", False),
]


def indicator_value(code, country, i):
    """Returns the cell text for indicator `code` (e.g. 'h6') on day i."""
    c = country
    table = {
        "c1": {"DEU": 3, "JOR": 3, "SWE": 1},
        "c3": {"DEU": 2, "JOR": 2, "SWE": 2},
        "c4": {"DEU": 4, "JOR": 4, "SWE": 3},
        "c5": {"DEU": 1, "JOR": 2, "SWE": 0},
        "c7": {"DEU": 1, "JOR": 2, "SWE": 0},
        "c8": {"DEU": 3, "JOR": 4, "SWE": 1},
        "e1": {"DEU": 2, "JOR": 1, "SWE": 2},
        "e2": {"DEU": 1, "JOR": 2, "SWE": 1},
        "e4": {"DEU": 0, "JOR": 0, "SWE": 0},
        "h1": {"DEU": 2, "JOR": 2, "SWE": 2},
    }
    if code in table:
        return table[code][c]
    if code == "c2":
        return {"DEU": 2 if i < 20 else 1, "JOR": 3, "SWE": 0}[c]
    if code == "c6":
        return {"DEU": 1, "JOR": 3 if i < 15 else 2, "SWE": 0}[c]
    if code == "e3":
        if c == "DEU":
            return 50000000000 if i % 10 == 0 else 0
        if c == "JOR":
            return 1500000 if i == 5 else 0
        return 2500000000 if i == 3 else 0
    if code == "h2":
        if c == "DEU":
            return 2 if i < 6 else 3
        if c == "JOR":
            return 1 if i < 15 else 2
        return 1
    if code == "h3":
        return {"DEU": 2, "JOR": 1, "SWE": 0 if i < 12 else 1}[c]
    if code == "h4":
        if c == "DEU":
            return 1000000000 + i * 1000000 if i % 7 == 0 else 0
        if c == "JOR":
            return 2000000 if i % 10 == 0 else 0
        return 50000000 if i == 12 else 0
    if code == "h5":
        if c == "DEU":
            return {0: 750000000, 20: 300000000}.get(i, 0)
        if c == "JOR":
            return 0
        return 1000000 if i == 25 else 0
    if code == "h6":
        if c == "DEU":
            return 0 if i < 6 else (2 if i < 21 else 3)
        if c == "JOR":
            if i < 3 or i == 15:
                return 0
            return 3
        return 0
    if code == "m1":
        return None
    raise KeyError(code)


ORDINAL_MAX = {"c1": 3, "c2": 3, "c3": 2, "c4": 4, "c5": 2, "c6": 3, "c7": 2,
               "c8": 4, "e1": 2, "e2": 2, "h1": 2, "h2": 3, "h3": 2, "h6": 4}


def stringency(country, i):
    codes = ["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "h1"]
    total = sum(Decimal(indicator_value(k, country, i)) / ORDINAL_MAX[k] for k in codes)
    return (total / len(codes) * 100).quantize(Decimal("0.01"))


def confirmed_cases(country, i):
    base = {"DEU": 77000, "JOR": 270, "SWE": 4900}[country]
    return base + sum(daily_cases(country, k) for k in range(i + 1))


def daily_cases(country, i):
    if country == "DEU":
        return 6000 - 150 * i
    if country == "JOR":
        return 10 + (i % 5)
    return 500 + 10 * i


def daily_deaths(country, i):
    return {"DEU": 150 + (i % 7), "JOR": i % 2, "SWE": 60 + (i % 4)}[country]


def fmt(v):
    return "" if v is None else str(v)


def oxcgrt_rows(days):
    header = ["CountryName", "CountryCode", "Date"]
    for col, flagged in INDICATOR_COLUMNS:
        header.append(col)
        if flagged:
            header.append(col.split("_")[0] + "_Flag")
    header += ["ConfirmedCases", "ConfirmedDeaths", "StringencyIndex",
               "GovernmentResponseIndex", "ContainmentHealthIndex", "EconomicSupportIndex"]
    rows = []
    for code, name in COUNTRIES:
        for i in range(days):
            d = START + dt.timedelta(days=i)
            row = [name, code, d.strftime("%Y%m%d")]
            for col, flagged in INDICATOR_COLUMNS:
                k = col.split("_")[0].lower()
                v = indicator_value(k, code, i)
                row.append(fmt(v))
                if flagged:
                    row.append("1" if v else "")
            s = stringency(code, i)
            row += [str(confirmed_cases(code, i)),
                    str(sum(daily_deaths(code, k) for k in range(i + 1))),
                    str(s), str(s), str(s), "NA"]
            rows.append(row)
    return header, rows


def ecdc_rows(days):
    header = ["dateRep", "day", "month", "year", "cases", "deaths",
              "countriesAndTerritories", "geoId", "countryterritoryCode",
              "popData2019", "continentExp"]
    pops = {"DEU": 83019213, "JOR": 10101694, "SWE": 10230185}
    geo = {"DEU": "DE", "JOR": "JO", "SWE": "SE"}
    cont = {"DEU": "Europe", "JOR": "Asia", "SWE": "Europe"}
    rows = []
    for code, name in COUNTRIES:
        for i in range(days):
            d = START + dt.timedelta(days=i)
            rows.append([d.strftime("%d/%m/%Y"), str(d.day), str(d.month), str(d.year),
                         str(daily_cases(code, i)), str(daily_deaths(code, i)),
                         name, geo[code], code, str(pops[code]), cont[code]])
    return header, rows


def ilo_rows():
    header = ["ref_area", "ref_area_label", "time", "unemployment_rate",
              "labour_force_participation_rate"]
    rates = {"DEU": ["3.6", "4.2", "4.4"], "JOR": ["19.3", "23.0", "23.9"],
             "SWE": ["7.7", "9.1", "8.9"]}
    part = {"DEU": ["61.4", "60.9", "61.0"], "JOR": ["34.3", "33.9", "34.0"],
            "SWE": ["73.1", "72.2", "72.8"]}
    rows = []
    for code, name in COUNTRIES:
        for q in range(3):
            rows.append([code, name, f"2020Q{q + 1}", rates[code][q], part[code][q]])
    return header, rows


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as f:
        for r in [header] + rows:
            f.write(",".join(r) + "\n")


def canonical_decimal(d):
    d = d.normalize()
    if d == 0:
        return "0.0"
    s = format(d, "f")
    return s if "." in s else s + ".0"


def health_aggregates_expected(days=30):
    """Expected rows: ?country AVG(h2) AVG(h3) SUM(h4) SUM(h5) AVG(h6)."""
    out = []
    for code, _ in sorted(COUNTRIES):
        vals = {k: [indicator_value(k, code, i) for i in range(days)]
                for k in ["h2", "h3", "h4", "h5", "h6"]}
        n = Decimal(days)
        out.append([
            COUNTRY_NS + code,
            canonical_decimal(Decimal(sum(vals["h2"])) / n),
            canonical_decimal(Decimal(sum(vals["h3"])) / n),
            canonical_decimal(Decimal(sum(vals["h4"]))),
            canonical_decimal(Decimal(sum(vals["h5"]))),
            canonical_decimal(Decimal(sum(vals["h6"])) / n),
        ])
    return out


VARS = ["country", "avg_testing_policy", "avg_contact_tracing",
        "sum_investment_healthcare", "sum_investment_in_vaccines", "avg_facial_coverings"]


def main():
    os.makedirs(FIXTURES, exist_ok=True)
    os.makedirs(GOLDEN, exist_ok=True)
    write_csv(os.path.join(FIXTURES, "oxcgrt_3x30.csv"), *oxcgrt_rows(30))
    write_csv(os.path.join(FIXTURES, "oxcgrt_3x10.csv"), *oxcgrt_rows(10))
    write_csv(os.path.join(FIXTURES, "ecdc_3x30.csv"), *ecdc_rows(30))
    write_csv(os.path.join(FIXTURES, "ilo_3x3.csv"), *ilo_rows())

    rows = health_aggregates_expected()
    with open(os.path.join(GOLDEN, "health_aggregates.csv"), "w", encoding="utf-8", newline="") as f:
        f.write(",".join(VARS) + "\r\n")
        for r in rows:
            f.write(",".join(r) + "\r\n")

    bindings = []
    for r in rows:
        b = {"country": {"type": "uri", "value": r[0]}}
        for var, value in zip(VARS[1:], r[1:]):
            b[var] = {"type": "literal", "value": value, "datatype": XSD + "decimal"}
        bindings.append(b)
    doc = {"head": {"vars": VARS}, "results": {"bindings": bindings}}
    with open(os.path.join(GOLDEN, "health_aggregates.json"), "w", encoding="utf-8") as f:
        f.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
