import json

import pytest
from hypothesis import given, strategies as st

from arguide.plan import (
    MalformedDocument,
    PlanSchemaError,
    PlanStep,
    TaskPlan,
    VisualType,
    parse_plan,
    serialize_plan,
    validate_step,
)

# The five canonical example steps, one per visual type.
EXAMPLE_STEPS = [
    {
        "instruction": "press start button on the rice cooker",
        "visual_type": 1,
        "key_components": ["The orange Start button"],
    },
    {
        "instruction": "Return the basket to the air fryer to resume cooking",
        "visual_type": 2,
        "key_components": ["Air fryer basket", "translation"],
    },
    {
        "instruction": "Pull the filament out",
        "visual_type": 3,
        "key_components": ["filament on top of nozzle", "pinch"],
    },
    {
        "instruction": "Mix the ingredients with a whisk",
        "visual_type": 4,
        "key_components": ["Mixing bowl", "rotate", "whisk"],
    },
    {
        "instruction": "Let the food stand for 30s",
        "visual_type": 5,
        "key_components": ["Mixing bowl", "00:30"],
    },
]


def doc_with(steps):
    return json.dumps({"instructions": steps})


def test_all_example_steps_parse_and_validate():
    plan = parse_plan(doc_with(EXAMPLE_STEPS))
    assert len(plan.steps) == 5
    assert [int(s.visual_type) for s in plan.steps] == [1, 2, 3, 4, 5]
    for step in plan.steps:
        assert validate_step(step) == []
    assert plan.steps[4].wait_seconds() == 30


def test_widget_step_requires_mmss():
    step = dict(EXAMPLE_STEPS[4], key_components=["Mixing bowl", "30"])
    violations = validate_step(step, step_index=0)
    assert len(violations) == 1
    assert violations[0].field == "key_components[1]"


def test_parse_preserves_order_and_unknown_fields():
    steps = [dict(EXAMPLE_STEPS[0], note="extra provider metadata")]
    plan = parse_plan(doc_with(steps))
    assert plan.steps[0].extras == {"note": "extra provider metadata"}
    reparsed = parse_plan(serialize_plan(plan))
    assert reparsed == plan


def test_parse_collects_errors_across_steps_first_per_step():
    steps = [
        dict(EXAMPLE_STEPS[2], key_components=["filament", "twist"]),  # bad gesture
        EXAMPLE_STEPS[0],  # fine
        {"instruction": "", "visual_type": 9, "key_components": []},  # many problems
    ]
    with pytest.raises(PlanSchemaError) as err:
        parse_plan(doc_with(steps))
    violations = err.value.violations
    assert [v.step_index for v in violations] == [0, 2]
    assert violations[0].field == "key_components[1]"
    # only the first problem of step 2 is reported
    assert violations[1].field == "instruction"


@pytest.mark.parametrize("text", ["", "not json", "[1,2]", '{"steps": []}'])
def test_malformed_documents(text):
    with pytest.raises(MalformedDocument):
        parse_plan(text)


def test_empty_plan_rejected():
    with pytest.raises(PlanSchemaError):
        parse_plan(doc_with([]))


def test_blank_components_treated_as_absent():
    step = dict(EXAMPLE_STEPS[4], key_components=["Mixing bowl", "   "])
    violations = validate_step(step)
    assert violations and violations[0].field == "key_components"  # arity now wrong


def test_gesture_twist_rejected():
    step = dict(EXAMPLE_STEPS[2], key_components=["filament", "twist"])
    violations = validate_step(step)
    assert [v.field for v in violations] == ["key_components[1]"]


def test_visual_type_six_rejected():
    step = dict(EXAMPLE_STEPS[0], visual_type=6)
    violations = validate_step(step)
    assert violations[0].field == "visual_type"


VALID_PAYLOADS = {
    1: ["target"],
    2: ["target", "translation"],
    3: ["target", "pinch"],
    4: ["target", "rotate", "whisk"],
    5: ["target", "00:30"],
}


def required_ok(vt, arity):
    if vt == 1:
        return arity >= 1
    return arity == {2: 2, 3: 2, 4: 3, 5: 2}[vt]


FILLERS = ["translation", "pinch", "whisk", "00:30"]


@pytest.mark.parametrize("vt", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("arity", [0, 1, 2, 3, 4])
def test_arity_grid_exhaustive(vt, arity):
    """Across every (type, arity) cell, wrong arity reports an arity violation."""
    components = (["target"] + FILLERS)[:arity]
    step = {"instruction": "do the thing", "visual_type": vt, "key_components": components}
    violations = validate_step(step)
    if required_ok(vt, arity):
        # payload content may still be wrong for some filler combinations;
        # the arity itself must not be reported
        assert all("entries" not in v.reason for v in violations)
    else:
        assert violations, f"type {vt} arity {arity} accepted"
        field = violations[0].field
        assert field == "key_components"


def test_serialize_round_trip_all_examples():
    plan = parse_plan(doc_with(EXAMPLE_STEPS))
    assert parse_plan(serialize_plan(plan)) == plan


_gesture = st.sampled_from(["poke", "hook", "palm press", "grip", "cylindrical grasp", "pinch"])
_motion = st.sampled_from(["up and down", "left and right", "rotate", "clockwise", "counterclockwise"])
_text = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters=" "),
    min_size=1,
    max_size=30,
).filter(lambda s: s.strip())


@st.composite
def valid_step_doc(draw):
    vt = draw(st.integers(1, 5))
    target = draw(_text)
    if vt == 1:
        kc = [target]
    elif vt == 2:
        kc = [target, draw(st.sampled_from(["translation", "rotation"]))]
    elif vt == 3:
        kc = [target, draw(_gesture)]
    elif vt == 4:
        kc = [target, draw(_motion), draw(_text)]
    else:
        mm, ss = draw(st.integers(0, 59)), draw(st.integers(0, 59))
        kc = [target, f"{mm:02d}:{ss:02d}"]
    return {"instruction": draw(_text), "visual_type": vt, "key_components": kc}


@given(st.lists(valid_step_doc(), min_size=1, max_size=6))
def test_round_trip_property(steps):
    plan = parse_plan(doc_with(steps))
    assert parse_plan(serialize_plan(plan)) == plan


def test_plan_top_level_metadata():
    doc = json.dumps(
        {
            "instructions": EXAMPLE_STEPS,
            "source_query": "How to make a cup of coffee?",
            "device_hint": "espresso machine",
        }
    )
    plan = parse_plan(doc)
    assert plan.source_query == "How to make a cup of coffee?"
    assert plan.device_hint == "espresso machine"
    assert parse_plan(serialize_plan(plan)) == plan
