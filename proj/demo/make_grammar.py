#!/usr/bin/env python3
"""Writes demo/grammar.json, the German verb-second fragment used by the demos and tests.

Run from anywhere:  python3 demo/make_grammar.py
"""
import json
import pathlib

FEATURES = [
    "PHON", "LOC", "NONLOC", "HEAD", "SUBCAT", "SEM", "DSL", "FILLER",
    "POS", "VFORM", "FIN", "VPOS", "CASE", "MOD", "HINIT",
    "REL", "AGENT", "THEME", "ARG",
]


def head(pos, **extra):
    h = {"POS": pos, "MOD": "none", "HINIT": "-"}
    h.update(extra)
    return h


def np(case=None, sem="#a"):
    h = {"POS": "noun"}
    if case:
        h["CASE"] = case
    return {"LOC": {"HEAD": h, "SUBCAT": [], "SEM": sem}, "NONLOC": {"DSL": []}}


def sign(hd, subcat, sem):
    return {"LOC": {"HEAD": hd, "SUBCAT": subcat, "SEM": sem}, "NONLOC": {"DSL": []}}


def fin_verb(rel, *objs):
    """Finite verb-final verb with a nominative subject and the given complements."""
    subcat = [np("nom", "#a")] + list(objs)
    sem = {"REL": rel, "AGENT": "#a"}
    if objs:
        sem["THEME"] = "#t"
    return sign(head("verb", VFORM="fin", FIN="+", VPOS="final"), subcat, sem)


def inf_verb(rel, *objs):
    subcat = [np("nom", "#a")] + list(objs)
    sem = {"REL": rel, "AGENT": "#a"}
    if objs:
        sem["THEME"] = "#t"
    return sign(head("verb", VFORM="inf", FIN="-", VPOS="final"), subcat, sem)


V2_CLAUSE = {"LOC": {"HEAD": {"POS": "verb", "VFORM": "fin", "VPOS": "second"}, "SUBCAT": [], "SEM": "#t"},
             "NONLOC": {"DSL": [], "FILLER": "bound"}}
DASS_CLAUSE = {"LOC": {"HEAD": {"POS": "comp"}, "SUBCAT": [], "SEM": "#t"}, "NONLOC": {"DSL": []}}
PRED_PP = {"LOC": {"HEAD": {"POS": "prep", "MOD": "none"}, "SUBCAT": [], "SEM": "#t"}, "NONLOC": {"DSL": []}}


def pronoun(rel, case):
    return sign(head("noun", CASE=case), [], {"REL": rel})


def mass(rel):
    return sign(head("noun"), [], {"REL": rel})


def det(case):
    # determiners head the nominal phrase and take the noun as complement
    return sign(head("noun", CASE=case, HINIT="+"), [{"LOC": {"HEAD": {"POS": "cnoun"}, "SUBCAT": [], "SEM": "#n"}}],
                "#n")


def cnoun(rel):
    return sign(head("cnoun"), [], {"REL": rel})


def adverb(rel, **mod_head):
    mod_head = {"POS": "verb", "VPOS": "final", **mod_head}
    hd = {"POS": "adv", "HINIT": "-", "MOD": {"HEAD": mod_head, "SEM": "#m"}}
    return sign(hd, [], {"REL": rel, "ARG": "#m"})


def temporal_prep(rel):
    """Preposition heading a verbal modifier: im april, anfang april."""
    hd = {"POS": "prep", "HINIT": "+", "MOD": {"HEAD": {"POS": "verb", "VPOS": "final"}, "SEM": "#m"}}
    return sign(hd, [np(None, "#t")], {"REL": rel, "ARG": "#m", "THEME": "#t"})


def pred_prep(rel):
    return sign(head("prep", HINIT="+"), [np(None, "#t")], {"REL": rel, "THEME": "#t"})


NP_ACC = np("acc", "#t")

LEXICON = [
    # finite verbs; each gets a second-position form from the lexical rule
    ("reparierte", "reparierte", fin_verb("fix", NP_ACC)),
    ("kaufte", "kaufte", fin_verb("buy", NP_ACC)),
    ("sah", "sah", fin_verb("see", NP_ACC)),
    ("habe", "habe", fin_verb("have", NP_ACC)),
    ("bin", "bin", fin_verb("be", PRED_PP)),
    ("glaube/v2", "glaube", fin_verb("believe", V2_CLAUSE)),
    ("glaube/dass", "glaube", fin_verb("believe", DASS_CLAUSE)),
    ("dachte/v2", "dachte", fin_verb("think", V2_CLAUSE)),
    ("dachte/dass", "dachte", fin_verb("think", DASS_CLAUSE)),
    ("sollst", "sollst", sign(head("verb", VFORM="fin", FIN="+", VPOS="final"),
                              [{"#s": np("nom", "#a")},
                               {"LOC": {"HEAD": {"POS": "verb", "VFORM": "inf", "VPOS": "final"},
                                        "SUBCAT": ["#s"], "SEM": "#k"},
                                "NONLOC": {"DSL": []}}],
                              {"REL": "shall", "ARG": "#k"})),
    ("willst", "willst", sign(head("verb", VFORM="fin", FIN="+", VPOS="final"),
                              [{"#s": np("nom", "#a")},
                               {"LOC": {"HEAD": {"POS": "verb", "VFORM": "inf", "VPOS": "final"},
                                        "SUBCAT": ["#s"], "SEM": "#k"},
                                "NONLOC": {"DSL": []}}],
                              {"REL": "want", "AGENT": "#a", "ARG": "#k"})),
    # infinitives
    ("töten", "töten", inf_verb("kill")),
    ("reparieren", "reparieren", inf_verb("fix", NP_ACC)),
    ("kaufen", "kaufen", inf_verb("buy", NP_ACC)),
    # nominals
    ("er", "er", pronoun("er", "nom")),
    ("ich", "ich", pronoun("ich", "nom")),
    ("du", "du", pronoun("du", "nom")),
    ("wir", "wir", pronoun("wir", "nom")),
    ("ihn", "ihn", pronoun("ihn", "acc")),
    ("den", "den", det("acc")),
    ("der", "der", det("nom")),
    ("das/nom", "das", det("nom")),
    ("das/acc", "das", det("acc")),
    ("wagen", "wagen", cnoun("wagen")),
    ("auto", "auto", cnoun("auto")),
    ("buch", "buch", cnoun("buch")),
    ("april", "april", mass("april")),
    ("mai", "mai", mass("mai")),
    ("urlaub", "urlaub", mass("urlaub")),
    ("zeit", "zeit", mass("zeit")),
    # adverbs modify verb-final projections; nicht only non-finite ones
    ("gestern", "gestern", adverb("yesterday")),
    ("heute", "heute", adverb("today")),
    ("noch", "noch", adverb("still")),
    ("dann", "dann", adverb("then")),
    ("nicht", "nicht", adverb("not", VFORM="inf")),
    # functional heads taking their complement to the right
    ("daß", "daß", sign({"POS": "comp", "HINIT": "+", "MOD": "none"},
                        [{"LOC": {"HEAD": {"POS": "verb", "VFORM": "fin", "VPOS": "final"}, "SUBCAT": [], "SEM": "#s"},
                          "NONLOC": {"DSL": []}}], "#s")),
    ("in", "in", pred_prep("in")),
    ("im", "im", temporal_prep("in_time")),
    ("anfang", "anfang", temporal_prep("begin")),
    ("ende", "ende", temporal_prep("end")),
]

NONLOC_SHARED = {"DSL": "#d", "FILLER": "#f"}
# the filler-head schemata only close verb-second clauses
V2_HEAD = {"POS": "verb", "VPOS": "second"}

SCHEMATA = [
    {"name": "head-complement", "head": 1,
     "daughters": [{"LOC": "#cl", "NONLOC": "#cn"},
                   {"LOC": {"HEAD": {"#h": {"VPOS": "final"}},
                            "SUBCAT": ["#s", {"LOC": "#cl", "NONLOC": "#cn"}, "|", "#r"], "SEM": "#sem"},
                    "NONLOC": NONLOC_SHARED}],
     "mother": {"LOC": {"HEAD": "#h", "SUBCAT": ["#s", "|", "#r"], "SEM": "#sem"}, "NONLOC": NONLOC_SHARED}},
    {"name": "head-complement", "label": "head-complement-initial", "head": 0,
     "daughters": [{"LOC": {"HEAD": {"#h": {"HINIT": "+"}}, "SUBCAT": [{"LOC": "#cl", "NONLOC": "#cn"}],
                            "SEM": "#sem"},
                    "NONLOC": NONLOC_SHARED},
                   {"LOC": "#cl", "NONLOC": "#cn"}],
     "mother": {"LOC": {"HEAD": "#h", "SUBCAT": [], "SEM": "#sem"}, "NONLOC": NONLOC_SHARED}},
    {"name": "head-subject", "head": 1,
     "daughters": [{"LOC": "#sl", "NONLOC": "#sn"},
                   {"LOC": {"HEAD": {"#h": {"VPOS": "final"}}, "SUBCAT": [{"LOC": "#sl", "NONLOC": "#sn"}],
                            "SEM": "#sem"},
                    "NONLOC": NONLOC_SHARED}],
     "mother": {"LOC": {"HEAD": "#h", "SUBCAT": [], "SEM": "#sem"}, "NONLOC": NONLOC_SHARED}},
    {"name": "head-adjunct", "head": 1,
     "daughters": [{"LOC": {"HEAD": {"MOD": "#hl"}, "SUBCAT": [], "SEM": "#asem"}},
                   {"LOC": {"#hl": {"HEAD": "#h", "SUBCAT": "#sc"}}, "NONLOC": NONLOC_SHARED}],
     "mother": {"LOC": {"HEAD": "#h", "SUBCAT": "#sc", "SEM": "#asem"}, "NONLOC": NONLOC_SHARED}},
    {"name": "v2-selection", "head": 0,
     "daughters": [{"LOC": {"HEAD": {"#h": {"VPOS": "second"}}, "SUBCAT": [{"LOC": "#vl", "NONLOC": "#vn"}]},
                    "NONLOC": {"DSL": []}},
                   {"LOC": {"#vl": {"SUBCAT": "#vsc", "SEM": "#sem"}}, "NONLOC": {"#vn": {"DSL": ["#dl"]}}}],
     "mother": {"LOC": {"HEAD": "#h", "SUBCAT": "#vsc", "SEM": "#sem"}, "NONLOC": {"DSL": [], "FILLER": "open"}}},
    {"name": "filler-head", "label": "filler-head-argument", "head": 1,
     "daughters": [{"LOC": "#fl", "NONLOC": "#fn"},
                   {"LOC": {"HEAD": {"#h": V2_HEAD}, "SUBCAT": [{"LOC": "#fl", "NONLOC": "#fn"}], "SEM": "#sem"},
                    "NONLOC": {"DSL": "#d", "FILLER": "open"}}],
     "mother": {"LOC": {"HEAD": "#h", "SUBCAT": [], "SEM": "#sem"}, "NONLOC": {"DSL": "#d", "FILLER": "bound"}}},
    {"name": "filler-head", "label": "filler-head-adjunct", "head": 1,
     "daughters": [{"LOC": {"HEAD": {"MOD": {"SEM": "#hs"}}, "SUBCAT": [], "SEM": "#fs"}},
                   {"LOC": {"HEAD": {"#h": V2_HEAD}, "SUBCAT": [], "SEM": "#hs"},
                    "NONLOC": {"DSL": "#d", "FILLER": "open"}}],
     "mother": {"LOC": {"HEAD": "#h", "SUBCAT": [], "SEM": "#fs"}, "NONLOC": {"DSL": "#d", "FILLER": "bound"}}},
]


def main():
    doc = {
        "features": FEATURES,
        "lexicon": [{"id": i, "orth": o, "avm": a} for i, o, a in LEXICON],
        "schemata": SCHEMATA,
    }
    out = pathlib.Path(__file__).resolve().parent / "grammar.json"
    out.write_text(json.dumps(doc, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
