import json

from oracles import DATA, generate


def test_frozen_data_matches_a_fresh_oracle_run():
    assert json.loads(DATA.read_text()) == generate()
