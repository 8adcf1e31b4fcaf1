import hypothesis

hypothesis.settings.register_profile(
    "ci", max_examples=40, derandomize=True, deadline=None
)
hypothesis.settings.load_profile("ci")
