"""Published JSON Schemas for every CLI command's output.

The test suite validates each command's stdout against the schema here;
rationals are serialized as exact ``p/q`` strings throughout.
"""

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}

EXACT_COMPLEX = {
    "type": "object",
    "required": ["re", "im"],
    "properties": {"re": RATIONAL, "im": RATIONAL},
    "additionalProperties": False,
}

CHARGE = {
    "type": "object",
    "required": ["z1", "z2"],
    "properties": {"z1": EXACT_COMPLEX, "z2": EXACT_COMPLEX},
    "additionalProperties": False,
}

INT_PAIR = {
    "type": "array",
    "items": {"type": "integer"},
    "minItems": 2,
    "maxItems": 2,
}

PHASE = {
    "type": "object",
    "required": ["shift", "direction", "approx"],
    "properties": {
        "shift": {"type": "integer"},
        "direction": INT_PAIR,
        "approx": {"type": "number"},
    },
    "additionalProperties": False,
}

SPHERE_POINT = {
    "oneOf": [
        {"const": "infinity"},
        {
            "type": "object",
            "required": ["mass_sq", "phase", "approx"],
            "properties": {
                "mass_sq": RATIONAL,
                "phase": {
                    "type": "object",
                    "required": ["shift", "direction"],
                    "properties": {
                        "shift": {"type": "integer"},
                        "direction": INT_PAIR,
                    },
                    "additionalProperties": False,
                },
                "approx": {
                    "type": "array",
                    "items": {"type": "number"},
                    "minItems": 2,
                    "maxItems": 2,
                },
            },
            "additionalProperties": False,
        },
    ]
}

HN_FACTOR = {
    "type": "object",
    "required": ["expr", "class", "phase", "mass_sq"],
    "properties": {
        "expr": {"type": "string"},
        "class": INT_PAIR,
        "phase": PHASE,
        "mass_sq": RATIONAL,
    },
    "additionalProperties": False,
}

PROP_REPORT = {
    "type": "object",
    "required": ["proposition", "charge", "universe_bounds", "checked", "violations"],
    "properties": {
        "proposition": {"type": "string"},
        "charge": CHARGE,
        "universe_bounds": {"type": "object"},
        "checked": {"type": "integer"},
        "violations": {"type": "array", "items": {"type": "object"}},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

SCHEMAS = {
    "hn": {
        "type": "object",
        "required": ["command", "object", "regime", "factors"],
        "properties": {
            "command": {"const": "hn"},
            "object": {"type": "string"},
            "regime": {"enum": ["AllSemistable", "Collapsed", "Degenerate"]},
            "factors": {"type": "array", "items": HN_FACTOR},
        },
        "additionalProperties": False,
    },
    "ztilde": {
        "type": "object",
        "required": ["command", "object", "points"],
        "properties": {
            "command": {"const": "ztilde"},
            "object": {"type": "string"},
            "points": {"type": "array", "items": SPHERE_POINT},
        },
        "additionalProperties": False,
    },
    "fiber": {
        "type": "object",
        "required": ["command", "object", "target", "universe_size", "members"],
        "properties": {
            "command": {"const": "fiber"},
            "object": {"type": "string"},
            "target": {"type": "array", "items": SPHERE_POINT},
            "universe_size": {"type": "integer"},
            "members": {"type": "array", "items": {"type": "string"}},
        },
        "additionalProperties": False,
    },
    "jh": {
        "type": "object",
        "required": ["command", "object", "phase", "factors"],
        "properties": {
            "command": {"const": "jh"},
            "object": {"type": "string"},
            "phase": PHASE,
            "factors": {"type": "array", "items": {"type": "string"}},
        },
        "additionalProperties": False,
    },
    "sequiv": {
        "type": "object",
        "required": ["command", "left", "right", "s_equivalent"],
        "properties": {
            "command": {"const": "sequiv"},
            "left": {"type": "string"},
            "right": {"type": "string"},
            "s_equivalent": {"type": "boolean"},
            "left_factors": {"type": "array", "items": {"type": "string"}},
            "right_factors": {"type": "array", "items": {"type": "string"}},
        },
        "additionalProperties": False,
    },
    "faithful-check": {
        "type": "object",
        "required": ["command", "faithful", "witness"],
        "properties": {
            "command": {"const": "faithful-check"},
            "faithful": {"type": "boolean"},
            "witness": {"oneOf": [{"type": "null"}, {"type": "array", "items": INT_PAIR}]},
        },
        "additionalProperties": False,
    },
    "sample-faithful": {
        "type": "object",
        "required": [
            "command",
            "grid_bound",
            "count",
            "seed",
            "non_faithful",
            "fraction_non_faithful",
            "witnesses",
        ],
        "properties": {
            "command": {"const": "sample-faithful"},
            "grid_bound": {"type": "integer"},
            "count": {"type": "integer"},
            "seed": {"type": "integer"},
            "non_faithful": {"type": "integer"},
            "fraction_non_faithful": RATIONAL,
            "witnesses": {"type": "array", "items": CHARGE},
        },
        "additionalProperties": False,
    },
    "twist": {
        "type": "object",
        "required": [
            "command",
            "w",
            "object",
            "result",
            "class_before",
            "class_after",
            "k_theory_consistent",
        ],
        "properties": {
            "command": {"const": "twist"},
            "w": {"type": "integer"},
            "object": {"type": "string"},
            "result": {"type": "string"},
            "class_before": INT_PAIR,
            "class_after": INT_PAIR,
            "k_theory_consistent": {"type": "boolean"},
        },
        "additionalProperties": False,
    },
    "check-props": {
        "type": "object",
        "required": ["command", "oracle", "reports", "violations_total"],
        "properties": {
            "command": {"const": "check-props"},
            "oracle": {"type": "boolean"},
            "reports": {
                "type": "array",
                "items": {
                    "oneOf": [
                        PROP_REPORT,
                        {
                            "type": "object",
                            "required": ["proposition", "checked", "violations"],
                            "properties": {
                                "proposition": {"type": "string"},
                                "checked": {"type": "integer"},
                                "violations": {"type": "array", "items": {"type": "object"}},
                            },
                            "additionalProperties": False,
                        },
                    ]
                },
            },
            "violations_total": {"type": "integer"},
        },
        "additionalProperties": False,
    },
    "plot": {
        "type": "object",
        "required": ["command", "out", "objects", "markers"],
        "properties": {
            "command": {"const": "plot"},
            "out": {"type": "string"},
            "objects": {"type": "integer"},
            "markers": {"type": "integer"},
        },
        "additionalProperties": False,
    },
}
