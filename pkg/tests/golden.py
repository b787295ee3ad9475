"""Frozen reference data: quasi-isolated classes and non-saturated Levi types."""

# (order, centralizer type, |A(s)|, isolated) for each nontrivial quasi-isolated class
QUASI_ISOLATED = {
    "G2": [(2, "A1+A1", 1, True), (3, "A2", 1, True)],
    "F4": [(2, "B4", 1, True), (2, "C3+A1", 1, True), (3, "A2+A2", 1, True), (4, "A3+A1", 1, True)],
    "E6": [
        (2, "A5+A1", 1, True),
        (3, "A2+A2+A2", 3, True),
        (3, "D4", 3, False),
        (6, "A1+A1+A1+A1", 3, False),
    ],
    "E7": [
        (2, "D6+A1", 1, True),
        (2, "A7", 2, True),
        (2, "E6", 2, False),
        (3, "A5+A2", 1, True),
        (4, "A3+A3+A1", 2, True),
        (4, "D4+A1+A1", 2, False),
        (6, "A2+A2+A2", 2, False),
    ],
    "E8": [
        (2, "D8", 1, True),
        (2, "E7+A1", 1, True),
        (3, "A8", 1, True),
        (3, "E6+A2", 1, True),
        (4, "D5+A3", 1, True),
        (4, "A7+A1", 1, True),
        (5, "A4+A4", 1, True),
        (6, "A5+A2+A1", 1, True),
    ],
}

NON_SIMPLY_CONNECTED_LEVIS = {
    "E6": {"A2+A2", "A2+A2+A1", "A5"},
    "E7": {
        "D6", "A5+A1", "A3+A2+A1", "D5+A1", "A5", "D4+A1", "A3+A1+A1",
        "A2+A1+A1+A1", "A3+A1", "A1+A1+A1+A1", "A1+A1+A1",
    },
}

E7_ORDER = "q^63.Φ1^7.Φ2^7.Φ3^3.Φ4^2.Φ5.Φ6^3.Φ7.Φ8.Φ9.Φ10.Φ12.Φ14.Φ18"

E7_DEFECT_TABLE = {
    "E7:8": ("3^4.|Φ1|_3^7", "1"),
    "E7:9": ("3.|Φ1|_3^3", "3^3.|Φ1|_3^4"),
    "E7:10": ("3^2.|Φ1|_3^4", "3^2.|Φ1|_3^3"),
    "E7:11": ("|Φ1|_3", "3^4.|Φ1|_3^6"),
}


def rows_of(inventory):
    return sorted((c.order, c.type_string, c.a_s_order, c.isolated) for c in inventory.classes if c.order > 1)
