import hypothesis
import pytest

from chainline.assets import fixture_path, load_bundled_model

hypothesis.settings.register_profile("ci", deadline=None)
hypothesis.settings.load_profile("ci")


@pytest.fixture(scope="session")
def asset_model():
    return load_bundled_model()


@pytest.fixture(scope="session")
def spare_parts_fixture():
    return fixture_path("spare_parts").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def dairy_fixture():
    return fixture_path("dairy").read_text(encoding="utf-8")
