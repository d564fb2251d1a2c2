import itertools
import json

import pytest

from portsec import archmodel as am
from portsec.archmodel import (
    AccessEdge,
    AccessMode,
    Component,
    EntryPoint,
    Host,
    ModelError,
    Principal,
    Resource,
    ResourceKind,
    Rotation,
    Service,
    SystemModel,
    ValueLevel,
    parse_model,
    privilege_dominates,
    serialize_model,
    validate_model,
)

from conftest import corpus_path


CORPUS_MODELS = [
    "tos-pcs-model.json", "tos-pcs-hardened.json",
    "rule-R1.json", "rule-R2.json", "rule-R3.json", "rule-R4.json",
    "rule-R5.json", "rule-R6.json", "rule-R7.json",
]


def test_bundled_model_has_three_hosts(vulnerable_model):
    assert len(vulnerable_model.hosts) == 3


def test_bundled_model_validates_clean(vulnerable_model):
    assert validate_model(vulnerable_model) == []


@pytest.mark.parametrize("name", CORPUS_MODELS)
def test_every_corpus_model_parses_clean(name):
    model = parse_model(corpus_path(name).read_text())
    assert validate_model(model) == []


@pytest.mark.parametrize("name", CORPUS_MODELS)
def test_parse_serialize_parse_is_a_fixed_point(name):
    first = parse_model(corpus_path(name).read_text())
    serialized = serialize_model(first)
    second = parse_model(json.dumps(serialized))
    assert second == first
    assert serialize_model(second) == serialized


def test_system_outranks_admin(vulnerable_model):
    assert privilege_dominates(vulnerable_model, "SYSTEM", "Admin") is True


def test_privilege_is_reflexive(vulnerable_model):
    for principal in vulnerable_model.principals:
        assert privilege_dominates(vulnerable_model, principal, principal)


def test_admin_does_not_dominate_system(vulnerable_model):
    assert privilege_dominates(vulnerable_model, "Admin", "SYSTEM") is False


def test_privilege_is_a_total_preorder(vulnerable_model):
    principals = vulnerable_model.principals
    for a, b in itertools.product(principals, repeat=2):
        forward = privilege_dominates(vulnerable_model, a, b)
        backward = privilege_dominates(vulnerable_model, b, a)
        assert forward or backward  # totality
        assert forward == (a.rank >= b.rank)  # consistency with ranks
    for a, b, c in itertools.product(principals, repeat=3):
        if privilege_dominates(vulnerable_model, a, b) and privilege_dominates(vulnerable_model, b, c):
            assert privilege_dominates(vulnerable_model, a, c)


def test_unknown_principal_is_a_usage_error(vulnerable_model):
    with pytest.raises(ValueError, match="unknown principal"):
        privilege_dominates(vulnerable_model, "SYSTEM", "nobody")


def test_foreign_principal_is_a_usage_error(vulnerable_model):
    foreign = Principal("SYSTEM", rank=99)
    with pytest.raises(ValueError, match="does not belong"):
        privilege_dominates(vulnerable_model, foreign, "Admin")


def test_empty_document_reports_missing_entry_points():
    with pytest.raises(ModelError) as excinfo:
        parse_model("{}")
    assert any("missing entry_points" in e for e in excinfo.value.errors)


def test_syntax_error_reports_position():
    with pytest.raises(ModelError) as excinfo:
        parse_model('{"hosts": [,]}')
    assert "syntax error at line 1" in excinfo.value.errors[0]


def test_schema_error_reports_path(vulnerable_model):
    data = json.loads(corpus_path("tos-pcs-model.json").read_text())
    data["resources"][0]["value"] = "Critical"
    with pytest.raises(ModelError) as excinfo:
        parse_model(json.dumps(data))
    assert any("resources[0]" in e for e in excinfo.value.errors)


def test_dangling_reference_is_a_parse_error():
    data = json.loads(corpus_path("rule-R1.json").read_text())
    data["resources"][0]["owner"] = "ghost"
    with pytest.raises(ModelError, match="ghost"):
        parse_model(json.dumps(data))


def test_credential_store_requires_password_storage():
    data = json.loads(corpus_path("rule-R1.json").read_text())
    data["resources"].append({"id": "vault", "kind": "CredentialStore", "value": "High",
                              "owner": "SYSTEM"})
    with pytest.raises(ModelError, match="attrs|password_storage"):
        parse_model(json.dumps(data))
    data["resources"][-1]["attrs"] = {"key_location": "none"}
    with pytest.raises(ModelError, match="password_storage"):
        parse_model(json.dumps(data))


def test_zero_rotation_rejected():
    data = json.loads(corpus_path("rule-R1.json").read_text())
    data["resources"].append({"id": "log", "kind": "Log", "value": "Low", "owner": "Admin",
                              "attrs": {"rotation": {"max_files": 0, "entries_per_file": 10}}})
    with pytest.raises(ModelError, match="max_files"):
        parse_model(json.dumps(data))


def test_bad_dependency_version_rejected():
    data = json.loads(corpus_path("rule-R1.json").read_text())
    data["dependencies"].append({"component": "frontend", "package": "p", "version": "1.2.beta"})
    with pytest.raises(ModelError, match="version"):
        parse_model(json.dumps(data))


def _tiny_model(**overrides) -> SystemModel:
    base = dict(
        hosts=(Host("h"),),
        principals=(Principal("root", 2), Principal("user", 1)),
        components=(Component("c", "h", "root", (Service("svc", True, True),)),),
        resources=(Resource("r", ResourceKind.DATABASE, ValueLevel.HIGH, "root"),),
        access=(AccessEdge("c", "r", frozenset({AccessMode.READ})),),
        channels=(),
        trust=(),
        entry_points=(EntryPoint("e", "user", "c", True),),
        dependencies=(),
    )
    base.update(overrides)
    return SystemModel(**base)


def test_validate_flags_dangling_owner():
    model = _tiny_model(resources=(
        Resource("r", ResourceKind.DATABASE, ValueLevel.HIGH, "nobody"),))
    defects = validate_model(model)
    assert len([d for d in defects if d.kind == "dangling-owner"]) == 1


def test_validate_flags_nonpositive_rotation():
    model = _tiny_model(resources=(
        Resource("r", ResourceKind.LOG, ValueLevel.LOW, "root", rotation=Rotation(0, 100)),))
    defects = validate_model(model)
    assert any(d.kind == "rotation-positive" for d in defects)


def test_validate_flags_missing_entry_points():
    model = _tiny_model(entry_points=())
    assert any(d.kind == "missing-entry-points" for d in validate_model(model))


def test_validate_flags_id_collision():
    model = _tiny_model(resources=(
        Resource("c", ResourceKind.DATABASE, ValueLevel.HIGH, "root"),))
    defects = validate_model(model)
    assert any(d.kind == "id-collision" for d in defects)


def test_additional_top_level_keys_rejected():
    data = json.loads(corpus_path("rule-R1.json").read_text())
    data["extras"] = []
    with pytest.raises(ModelError):
        parse_model(json.dumps(data))
