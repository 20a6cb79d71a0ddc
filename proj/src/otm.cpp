namespace ordauto {}
