"""Tunneling through general Smith-Volterra-Cantor barriers."""
