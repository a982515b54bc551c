#!/usr/bin/env python3
# Copyright 2026 The riskagent Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the benchmark fixture set and its scripted transcripts.

Answer keys come from mpmath, not from the C++ evaluator.
"""

import json
import pathlib

import mpmath

mpmath.mp.dps = 40
HERE = pathlib.Path(__file__).parent

F1_FLAGS = ["age_over_65", "hypertension", "diabetes", "prior_stroke", "heart_failure"]
F1_OPTIONS = [("A", "low"), ("B", "moderate"), ("C", "high"), ("D", "cannot be determined")]
F2_OPTIONS = [("A", "lower"), ("B", "elevated"), ("C", "very high"), ("D", "cannot be estimated")]


def f1_label(score):
    return "low" if score < 2 else "moderate" if score < 3 else "high"


def f2_label(age, smoker):
    risk = 1 / (1 + mpmath.exp(-(mpmath.mpf(-3) + mpmath.mpf("0.05") * age + (mpmath.mpf("1.2") if smoker else 0))))
    return ("lower" if risk < mpmath.mpf("0.5") else "elevated" if risk < mpmath.mpf("0.8") else "very high"), risk


def key_for(options, label):
    return next(k for k, t in options if t == label)


F1_CASES = [
    ("rqa-01", "A 52-year-old man without hypertension, diabetes, stroke or heart failure presents with chest tightness.", {}),
    ("rqa-02", "A 58-year-old woman with long-standing hypertension, no diabetes, no prior stroke and no heart failure presents with palpitations.", {"hypertension"}),
    ("rqa-03", "A 61-year-old man with hypertension and type 2 diabetes, never had a stroke and has no heart failure, presents with dizziness.", {"hypertension", "diabetes"}),
    ("rqa-04", "A 70-year-old woman with hypertension and a prior ischaemic stroke, no diabetes and no heart failure, presents with a headache.", {"age_over_65", "hypertension", "prior_stroke"}),
    ("rqa-05", "An 81-year-old man with diabetes, a prior stroke and chronic heart failure, normotensive, presents with fatigue.", {"age_over_65", "diabetes", "prior_stroke", "heart_failure"}),
    ("rqa-06", "A 77-year-old woman with hypertension, insulin-treated diabetes, an old stroke and heart failure presents with dyspnoea.", set(F1_FLAGS)),
]
F2_CASES = [
    ("rqa-07", "A 40-year-old non-smoking woman is admitted with community-acquired pneumonia.", 40, False),
    ("rqa-08", "A 60-year-old man who smokes a pack a day is admitted with community-acquired pneumonia.", 60, True),
    ("rqa-09", "An 80-year-old current smoker is admitted with lobar pneumonia.", 80, True),
    ("rqa-10", "A 70-year-old lifelong non-smoker is admitted with pneumonia.", 70, False),
    ("rqa-11", "A 90-year-old non-smoking nursing-home resident is admitted with pneumonia.", 90, False),
    ("rqa-12", "A 30-year-old smoker is admitted with community-acquired pneumonia.", 30, True),
]

# Items whose selection step picks the wrong calculator under riskqa, and
# whether the final answer happens to be right anyway.
WRONG_SELECTION = {"rqa-03": False, "rqa-09": True}
# Item whose first calculator run is malformed and corrected on turn 2.
RETRY_ITEM = "rqa-05"
# Baseline replies: which items each method answers correctly.
COT_RIGHT = {"rqa-01", "rqa-04", "rqa-06", "rqa-08", "rqa-11"}
RAG_RIGHT = {"rqa-01", "rqa-02", "rqa-04", "rqa-06", "rqa-07", "rqa-09", "rqa-11"}
NAME_RIGHT = {"rqa-01", "rqa-04", "rqa-06", "rqa-08", "rqa-09", "rqa-11"}
NAME_GARBAGE = "rqa-12"

F1_Q = " What is this patient's risk of a vascular event within 30 days?"
F2_Q = " What is this patient's predicted 30-day mortality category?"


def block(calc, lines):
    return "```calc\ncalculator: " + calc + "\n" + "".join(l + "\n" for l in lines) + "```"


def f1_block(flags):
    return block("f1", [f"{f} = {'true' if f in flags else 'false'}" for f in F1_FLAGS])


def f2_block(age, smoker):
    return block("f2", [f"age = {age} years", f"smoker = {'true' if smoker else 'false'}"])


items, rules = [], []
cot, rag, name = [], [], []


def wrong_other(options, key):
    return next(k for k, t in options if k != key)


def add_item(item_id, vignette, calc, options, label, right_block, alt_calc, alt_block):
    key = key_for(options, label)
    items.append({"id": item_id, "vignette": vignette,
                  "options": [{"label": k, "text": t} for k, t in options],
                  "answer_key": key, "oracle_calculator_id": calc})
    sel = alt_calc if item_id in WRONG_SELECTION else calc
    rules.append({"purpose": "select", "contains": [vignette], "response": f"Considering eligibility.\nSelected: {sel}"})

    def session(c, blk, answer):
        tag = "id: " + c + "\n"
        if item_id == RETRY_ITEM and c == calc:
            rules.append({"purpose": "compute", "contains": [vignette, tag],
                          "response": "```calc\ncalculator: " + c + "\nage_over_65 is true\n```"})
            rules.append({"purpose": "summarize_check", "contains": [vignette, tag], "turn": 1, "response": blk})
            rules.append({"purpose": "summarize_check", "contains": [vignette, tag], "turn": 2,
                          "response": "Summary: the calculator result is reported above."})
        else:
            rules.append({"purpose": "compute", "contains": [vignette, tag], "response": "Running the calculator.\n" + blk})
            rules.append({"purpose": "summarize_check", "contains": [vignette, tag],
                          "response": "Summary: the calculator result is reported above."})
        rules.append({"purpose": "answer_extract", "contains": [vignette, "calculator: " + c + " ("], "response": answer})

    session(calc, right_block, key)
    if item_id in WRONG_SELECTION:
        session(alt_calc, alt_block, key if WRONG_SELECTION[item_id] else wrong_other(options, key))

    def baseline(store, right, purpose):
        pick = key if item_id in right else wrong_other(options, key)
        store.append({"purpose": purpose, "contains": [vignette], "response": f"Weighing the findings. The answer is ({pick})."})

    baseline(cot, COT_RIGHT, "cot")
    baseline(rag, RAG_RIGHT, "rag")
    if item_id == NAME_GARBAGE:
        name.append({"purpose": "name", "contains": [vignette], "response": "I cannot decide."})
    else:
        baseline(name, NAME_RIGHT, "name")
    return key


oracle = {}
for item_id, text, flags in F1_CASES:
    label = f1_label(len(flags))
    oracle[item_id] = {"score": len(flags), "label": label}
    add_item(item_id, text + F1_Q, "f1", F1_OPTIONS, label, f1_block(flags), "f2", f2_block(70, False))
for item_id, text, age, smoker in F2_CASES:
    label, risk = f2_label(age, smoker)
    oracle[item_id] = {"risk": mpmath.nstr(risk, 20), "label": label}
    add_item(item_id, text + F2_Q, "f2", F2_OPTIONS, label, f2_block(age, smoker), "f1", f1_block({"age_over_65"}))

with open(HERE / "riskqa.jsonl", "w") as f:
    for it in items:
        f.write(json.dumps(it) + "\n")
for fname, entries in [("agent_script.json", rules), ("cot_script.json", cot), ("rag_script.json", rag),
                       ("name_script.json", name)]:
    json.dump({"mode": "rules", "entries": entries}, open(HERE / fname, "w"), indent=1)
json.dump(oracle, open(HERE / "oracle.json", "w"), indent=1)

with open(HERE / "registry" / "abstracts.jsonl", "w") as f:
    f.write(json.dumps({"pmid": "90000001", "title": "A five-factor score for vascular events",
                        "abstract": "One point each for age over 65, hypertension, diabetes, prior stroke and heart failure. "
                                    "Scores 0-1 are low, 2 moderate and 3-5 high risk of a vascular event within 30 days.",
                        "year": 2012, "citation_count": 120}) + "\n")
    f.write(json.dumps({"pmid": "90000002", "title": "A logistic model of pneumonia mortality in smokers",
                        "abstract": "Logit = -3 + 0.05 x age + 1.2 if current smoker. Predicted mortality below 50% is lower, "
                                    "50-80% elevated and 80% or more very high.",
                        "year": 2016, "citation_count": 45}) + "\n")
