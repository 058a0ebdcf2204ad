import json

import pytest

from semho_adapter import ContractError, load_schema, read_dataset, write_logits
from semho_adapter.tokenizers import DigitLevelTokenizer, basic_tokens


def test_schema_loads(toolkit_files):
    contract = load_schema(toolkit_files["schema"])
    assert contract.num_labels == 41
    assert contract.main_count == 4
    assert len(contract.groups) == 9


def test_schema_malformed(tmp_path):
    bad = tmp_path / "schema.json"
    bad.write_text(json.dumps({"labels": ["a", "b"]}))
    with pytest.raises(ContractError):
        load_schema(bad)


def test_dataset_reads_and_verifies_label_order(toolkit_files):
    contract = load_schema(toolkit_files["schema"])
    samples = read_dataset(toolkit_files["train"], contract)
    assert len(samples) == 128
    assert all(len(s.labels) == 41 for s in samples)
    assert all(sum(s.labels[:4]) == 1 for s in samples)


def test_label_order_mismatch_detected(toolkit_files, tmp_path):
    # permuting the schema's label order must trip the contract check
    doc = json.loads(toolkit_files["schema"].read_text())
    doc["labels"][4], doc["labels"][5] = doc["labels"][5], doc["labels"][4]
    shuffled = tmp_path / "schema.json"
    shuffled.write_text(json.dumps(doc))
    contract = load_schema(shuffled)
    with pytest.raises(ContractError) as err:
        read_dataset(toolkit_files["train"], contract)
    assert "label order" in str(err.value)


def test_logits_file_shape(tmp_path):
    path = tmp_path / "logits.jsonl"
    write_logits(path, [3, 1], [[0.5] * 41, [-0.5] * 41])
    lines = [json.loads(line) for line in path.read_text().splitlines()]
    assert [d["id"] for d in lines] == [3, 1]
    assert all(len(d["logits"]) == 41 for d in lines)


def test_offline_tokenizer_round_trip(toolkit_files, tmp_path):
    contract = load_schema(toolkit_files["schema"])
    samples = read_dataset(toolkit_files["train"], contract)
    tokenizer = DigitLevelTokenizer.build([s.text for s in samples], max_length=192)
    ids, mask = tokenizer.encode(samples[0].text)
    assert len(ids) == len(mask) == 192
    assert sum(mask) < 192  # canonical text fits without truncation
    saved = tmp_path / "vocab.json"
    tokenizer.save(saved)
    again = DigitLevelTokenizer.load(saved)
    assert again.encode(samples[0].text) == (ids, mask)


def test_digit_splitting_keeps_numeric_granularity():
    tokens = basic_tokens("Serving BS: ID BS3, RSRP -88.00 dBm")
    assert "8" in tokens and "-" in tokens and "." in tokens
    assert "serving" in tokens and "rsrp" in tokens
    assert not any(len(t) > 1 and t.isdigit() for t in tokens)
