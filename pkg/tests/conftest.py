import pytest

from sharecast import Cascade, KernelParams, ModelParams, ShareEvent, TimeframeSchedule


@pytest.fixture
def kernel_m1():
    # Unnormalized micro-kernel: 0.1/min constant up to 10 min, theta=1 tail.
    return KernelParams(c=0.1 / 60, s0=600.0, theta=1.0)


@pytest.fixture
def m1(kernel_m1):
    # Root (degree 10) at t=0, reshare A (degree 5) at 5 min.
    events = (
        ShareEvent(0, None, "root", 10, 0.0),
        ShareEvent(1, 0, "alice", 5, 300.0),
    )
    return Cascade(article_id="m1", post_time=0.0, events=events)


@pytest.fixture
def m1b(kernel_m1):
    # M1 plus reshare B (degree 100) at 8 min.
    events = (
        ShareEvent(0, None, "root", 10, 0.0),
        ShareEvent(1, 0, "alice", 5, 300.0),
        ShareEvent(2, 0, "bob", 100, 480.0),
    )
    return Cascade(article_id="m1b", post_time=0.0, events=events)


@pytest.fixture
def single_frame_schedule():
    # One 15-minute frame so the speed norm degenerates to 1.
    return TimeframeSchedule(boundaries_min=(0.0, 15.0))


@pytest.fixture
def params_m1(kernel_m1, single_frame_schedule):
    return ModelParams(kernel=kernel_m1, schedule=single_frame_schedule)


@pytest.fixture
def root_only():
    return Cascade(
        article_id="solo",
        post_time=0.0,
        events=(ShareEvent(0, None, "root", 7, 0.0),),
    )
