import pytest

from qualitative_decision.acts import DecisionFrame
from qualitative_decision.capacity import validate_capacity
from qualitative_decision.scale import Scale

# |S| = 4, m = 2: sigma({s0,s2}) < sigma({s1,s2}) but sigma({s0,s3}) > sigma({s1,s3})
SURE_THING_TABLE = {
    0b0000: 0,
    0b0001: 0, 0b0010: 0, 0b0100: 0, 0b1000: 0,
    0b0011: 0, 0b0101: 0, 0b0110: 1, 0b1001: 1, 0b1010: 0, 0b1100: 0,
    0b0111: 2, 0b1011: 2, 0b1101: 2, 0b1110: 2,
    0b1111: 2,
}


@pytest.fixture
def make_frame():
    def build(state_count, mu, table, scale_size=3):
        scale = Scale(scale_size)
        capacity = validate_capacity(table, state_count, scale)
        return DecisionFrame(state_count, scale, tuple(mu), capacity)
    return build


@pytest.fixture
def sure_thing_table():
    return dict(SURE_THING_TABLE)


@pytest.fixture
def sure_thing_frame(make_frame):
    # outcome 0 is x_*, outcome 1 is x^*
    return make_frame(4, (0, 2), SURE_THING_TABLE)


@pytest.fixture
def seeded_frames():
    return [DecisionFrame.random(3, 3, Scale(3), seed) for seed in range(50)]
