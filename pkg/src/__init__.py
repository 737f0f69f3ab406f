"""
ising-traffic: coherent Ising machine simulation and traffic assignment in Ising form
"""
