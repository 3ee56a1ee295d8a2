import hypothesis

hypothesis.settings.register_profile(
    "suite", derandomize=True, deadline=None, max_examples=60)
hypothesis.settings.load_profile("suite")
