namespace fbwave {}
