from hypothesis import settings

# One profile for the whole suite: no per-example deadline (numpy warm-up and
# shared-machine jitter trip the default), modest example counts.
settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")
