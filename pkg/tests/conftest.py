import numpy as np
import pytest

from arguide.fixtureset import fixture_dir
from arguide.vision import FrameRef, MockProvider


@pytest.fixture(scope="session")
def s1_provider():
    return MockProvider(fixture_dir("s1"))


@pytest.fixture(scope="session")
def s1_main_frame(s1_provider):
    snap = s1_provider.load_scene("main")
    return FrameRef(frame_id="main", image=snap.image)


@pytest.fixture(scope="session")
def s1_main_snapshot(s1_provider):
    return s1_provider.load_scene("main")


@pytest.fixture
def no_sleep():
    return lambda _: None


@pytest.fixture
def blank_frame():
    return FrameRef(frame_id="blank", image=np.zeros((480, 640, 3), np.uint8))
