from hypothesis import settings

settings.register_profile("repo", deadline=None, max_examples=200)
settings.load_profile("repo")
