from hypothesis import settings

# mpmath-heavy cases have slow cold caches; wall-clock deadlines only add noise.
settings.register_profile("pelltrib", deadline=None)
settings.load_profile("pelltrib")
