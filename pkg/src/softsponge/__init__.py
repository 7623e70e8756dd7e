"""Software delay-PUF TRNG with a soft-data sponge and an embedded certification suite."""

__version__ = "0.1.0"
