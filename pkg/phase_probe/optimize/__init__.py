"""사영 1차 최적화 패키지"""
