"""Pattern-density constructions: signature census, avoiding sets, builders and exact counting."""
