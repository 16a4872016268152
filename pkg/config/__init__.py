# Configuration package for hqdisk
