import numpy as np
import pytest
from hypothesis import settings

import uvlink

settings.register_profile("uvlink", deadline=None, max_examples=60)
settings.load_profile("uvlink")


@pytest.fixture(scope="session")
def sphere():
    return uvlink.lat_long_sphere()


@pytest.fixture(scope="session")
def sphere_accel(sphere):
    return uvlink.build_accel(sphere)


@pytest.fixture(scope="session")
def quad():
    return uvlink.unit_quad()


@pytest.fixture(scope="session")
def quad_accel(quad):
    return uvlink.build_accel(quad)


@pytest.fixture
def small_config():
    return uvlink.SessionConfig(uv_canvas_size=(128, 128), f=8.0)


@pytest.fixture
def white_image():
    return np.full((128, 128, 4), 255, dtype=np.uint8)


@pytest.fixture
def session(sphere, small_config, white_image):
    return uvlink.new_session(small_config, sphere, white_image)
