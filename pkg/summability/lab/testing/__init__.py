from summability.lab.testing.factories import make_experiment, make_space, make_trig_poly  # noqa
